import { ApiClient, type MetadataRef } from "./api.js";
import {
  beginSend,
  buildTraceView,
  completeSend,
  failSend,
  hideTrace,
  initialState,
  resumeFromHistory,
  setLanguage,
  setSupportedLanguages,
  showTrace,
  withSession,
  type ChatViewState,
} from "./state.js";
import {
  renderComposerState,
  renderLanguageSelector,
  renderMessages,
  renderTracePanel,
  type Handlers,
} from "./view.js";

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return fromQuery ?? window.location.origin;
}

function requireElement<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function fileToBase64(file: File): Promise<string> {
  const buffer = await file.arrayBuffer();
  let binary = "";
  for (const byte of new Uint8Array(buffer)) binary += String.fromCharCode(byte);
  return btoa(binary);
}

async function boot(): Promise<void> {
  const api = new ApiClient(apiBase());
  const messagesBox = requireElement<HTMLElement>("messages");
  const tracePanel = requireElement<HTMLElement>("trace-panel");
  const traceContent = requireElement<HTMLElement>("trace-content");
  const input = requireElement<HTMLTextAreaElement>("composer-input");
  const sendButton = requireElement<HTMLButtonElement>("send-button");
  const attachment = requireElement<HTMLInputElement>("attachment-input");
  const languageSelect = requireElement<HTMLSelectElement>("language-select");
  const traceClose = requireElement<HTMLButtonElement>("trace-close");

  let state: ChatViewState = initialState();

  const handlers: Handlers = {
    onShowTrace: (turnId) => void openTrace(turnId),
    onRetry: () => void send(state.lastQuery ?? ""),
  };

  function render(): void {
    renderMessages(messagesBox, state, handlers);
    renderTracePanel(tracePanel, traceContent, state.trace);
    renderLanguageSelector(languageSelect, state, (tag) => {
      state = setLanguage(state, tag);
    });
    renderComposerState(input, sendButton, state);
  }

  async function openTrace(turnId: number): Promise<void> {
    if (!state.sessionId) return;
    const trace = await api.trace(state.sessionId, turnId);
    state = showTrace(state, buildTraceView(turnId, trace));
    render();
  }

  async function collectAttachments(): Promise<MetadataRef[]> {
    const refs: MetadataRef[] = [];
    for (const file of Array.from(attachment.files ?? [])) {
      const reference = await api.uploadMetadata({
        filename: file.name,
        content_b64: await fileToBase64(file),
        kind: file.type.startsWith("image/") ? "image" : "file",
        caption: file.name,
      });
      refs.push({ reference, kind: file.type.startsWith("image/") ? "image" : "file", caption: file.name });
    }
    attachment.value = "";
    return refs;
  }

  async function send(text: string): Promise<void> {
    const attempt = beginSend(state, text);
    state = attempt.state;
    render();
    if (!attempt.accepted) return;
    try {
      if (!state.sessionId) {
        state = withSession(state, await api.createSession(state.language || undefined));
        window.sessionStorage.setItem("careagent_session", state.sessionId!);
      }
      const metadata = await collectAttachments();
      const response = await api.respond(
        state.sessionId!, text, metadata, state.language || undefined,
      );
      state = completeSend(state, response);
    } catch (error) {
      state = failSend(state, error instanceof Error ? error.message : String(error));
    }
    render();
  }

  traceClose.addEventListener("click", () => {
    state = hideTrace(state);
    render();
  });
  sendButton.addEventListener("click", () => {
    const text = input.value;
    input.value = "";
    void send(text);
  });
  input.addEventListener("keydown", (event) => {
    if (event.key === "Enter" && !event.shiftKey) {
      event.preventDefault();
      sendButton.click();
    }
  });

  try {
    const config = await api.config();
    state = setSupportedLanguages(state, config.languages);
  } catch {
    // selector falls back to English-only when the config endpoint is down
  }

  const savedSession = window.sessionStorage.getItem("careagent_session");
  if (savedSession) {
    try {
      const turns = await api.history(savedSession);
      state = resumeFromHistory(withSession(state, savedSession), turns);
    } catch {
      window.sessionStorage.removeItem("careagent_session");
    }
  }
  render();
}

void boot();
