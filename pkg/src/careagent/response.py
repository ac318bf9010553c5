"""Final answer generation from gathered action records.

Builds the "Thinker" mega prompt (metadata, history, action blocks, system
directive, question), asks the responder LLM, and hard-filters intermediate
store keys out of the reply. Key suppression is a post-filter, not just a
prompt instruction, so it holds regardless of model behavior.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import prompts
from .datapipe import REFERENCE_RE
from .llm import Backend, ChatMessage, CompletionParams

_KEY_WITH_QUOTES_RE = re.compile(rf"['\"]?{REFERENCE_RE.pattern}['\"]?")


@dataclass
class ThinkerBundle:
    """Inputs for one response-generation call."""

    question: str
    metadata: str = ""
    history: str = ""
    action_blocks: str = ""  # pre-formatted, possibly empty
    prefix: str = ""         # developer prefix spliced into the system directive


def build_system_directive(prefix: str = "") -> str:
    return prompts.get_template("responder.system_directive").format(prefix=prefix)


def build_thinker_prompt(bundle: ThinkerBundle) -> str:
    action_blocks = f"{bundle.action_blocks}\n\n" if bundle.action_blocks else ""
    return prompts.get_template("responder.thinker").format(
        metadata=bundle.metadata,
        history=bundle.history,
        action_blocks=action_blocks,
        thinker_rule=prompts.THINKER_RULE,
        system_directive=build_system_directive(bundle.prefix),
        question=bundle.question,
    )


def sanitize_answer(text: str) -> str:
    """Strip datapipe keys (and hugging quotes); leave ``address:[path]`` spans alone."""
    return _KEY_WITH_QUOTES_RE.sub("", text)


class ResponseGenerator:
    def __init__(self, llm: Backend, params: CompletionParams | None = None, prefix: str = ""):
        self.llm = llm
        self.params = params or CompletionParams(temperature=0.7)
        self.prefix = prefix

    def generate(self, bundle: ThinkerBundle) -> tuple[str, str]:
        """Returns (sanitized answer, thinker prompt used)."""
        if not bundle.prefix and self.prefix:
            bundle = ThinkerBundle(
                question=bundle.question,
                metadata=bundle.metadata,
                history=bundle.history,
                action_blocks=bundle.action_blocks,
                prefix=self.prefix,
            )
        prompt = build_thinker_prompt(bundle)
        raw = self.llm.complete([ChatMessage("user", prompt)], self.params)
        return sanitize_answer(raw), prompt
