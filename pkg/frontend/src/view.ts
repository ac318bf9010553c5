// DOM rendering. Everything is built with text nodes and createElement, so
// server-provided strings can never inject markup.

import type { ChatViewState, Message, TraceView } from "./state.js";
import { segmentReferences } from "./state.js";

export interface Handlers {
  onShowTrace(turnId: number): void;
  onRetry(): void;
}

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function referenceSpan(container: HTMLElement, text: string): void {
  for (const segment of segmentReferences(text)) {
    if (segment.kind === "reference") {
      const badge = el("span", "badge", segment.value.slice(0, 17) + "…");
      badge.title = segment.value;
      container.appendChild(badge);
    } else {
      container.appendChild(document.createTextNode(segment.value));
    }
  }
}

function messageBubble(message: Message, handlers: Handlers): HTMLElement {
  const bubble = el("div", `msg ${message.sender}`);
  bubble.appendChild(document.createTextNode(message.text));
  if (message.sender === "assistant" && message.turnId !== undefined) {
    const button = el("button", "trace-link", "show trace");
    button.addEventListener("click", () => handlers.onShowTrace(message.turnId!));
    bubble.appendChild(button);
  }
  if (message.retryable) {
    const button = el("button", "retry-link", "retry");
    button.addEventListener("click", () => handlers.onRetry());
    bubble.appendChild(button);
  }
  return bubble;
}

export function renderMessages(
  container: HTMLElement, state: ChatViewState, handlers: Handlers,
): void {
  container.replaceChildren(...state.messages.map((m) => messageBubble(m, handlers)));
  if (state.pending) {
    container.appendChild(el("div", "msg notice pending-indicator", "thinking…"));
  }
  container.scrollTop = container.scrollHeight;
}

export function renderTracePanel(
  panel: HTMLElement, content: HTMLElement, trace: TraceView | null,
): void {
  content.replaceChildren();
  if (trace === null) {
    panel.classList.add("hidden");
    return;
  }
  panel.classList.remove("hidden");
  content.appendChild(el("h2", undefined, `Trace for turn ${trace.turnId}`));
  if (trace.missing) {
    content.appendChild(el("p", "empty-state", "No trace recorded for this turn."));
    return;
  }
  if (trace.tasksUsed.length === 0 && trace.steps.length === 0) {
    content.appendChild(el("p", "empty-state", "No tools were used for this turn."));
    return;
  }
  const chain = el("p", "task-chain", trace.tasksUsed.join(" → "));
  content.appendChild(chain);
  const list = el("ol", "trace-steps");
  for (const step of trace.steps) {
    const item = el("li", step.failed ? "trace-step failed" : "trace-step");
    item.appendChild(el("div", "step-name", step.chatName + (step.failed ? " (failed)" : "")));
    const inputs = el("div", "step-inputs");
    inputs.appendChild(el("span", "label", "inputs: "));
    referenceSpan(inputs, JSON.stringify(step.inputs));
    item.appendChild(inputs);
    const output = el("div", "step-output");
    output.appendChild(el("span", "label", "output: "));
    referenceSpan(output, step.output);
    item.appendChild(output);
    list.appendChild(item);
  }
  content.appendChild(list);
}

export function renderLanguageSelector(
  select: HTMLSelectElement, state: ChatViewState, onChange: (tag: string) => void,
): void {
  select.replaceChildren();
  const auto = document.createElement("option");
  auto.value = "";
  auto.textContent = "auto";
  select.appendChild(auto);
  for (const tag of state.supportedLanguages) {
    const option = document.createElement("option");
    option.value = tag;
    option.textContent = tag;
    select.appendChild(option);
  }
  select.value = state.language;
  select.onchange = () => onChange(select.value);
}

export function renderComposerState(
  input: HTMLTextAreaElement, button: HTMLButtonElement, state: ChatViewState,
): void {
  button.disabled = state.pending;
  input.placeholder = state.pending ? "waiting for the answer…" : "Ask a health question…";
}
