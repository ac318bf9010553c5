// Pure view-state transitions. The server is the source of truth: the trace
// panel shows exactly what the API returned, with no client-side inference.

import type { HistoryTurn, RespondResponse, TraceResponse } from "./api.js";

export type Sender = "user" | "assistant" | "error" | "notice";

export interface Message {
  sender: Sender;
  text: string;
  turnId?: number;
  retryable?: boolean;
}

export interface TraceStep {
  chatName: string;
  inputs: string[];
  output: string;
  failed: boolean;
}

export interface TraceView {
  turnId: number;
  tasksUsed: string[]; // verbatim from the API
  steps: TraceStep[];
  missing: boolean; // unknown turn renders as an empty state
}

export interface ChatViewState {
  sessionId: string | null;
  messages: Message[];
  pending: boolean;
  language: string; // "" means server-side detection
  supportedLanguages: string[];
  trace: TraceView | null;
  lastQuery: string | null; // kept for the retry affordance
}

export function initialState(): ChatViewState {
  return {
    sessionId: null,
    messages: [],
    pending: false,
    language: "",
    supportedLanguages: ["en"],
    trace: null,
    lastQuery: null,
  };
}

export function withSession(state: ChatViewState, sessionId: string): ChatViewState {
  return { ...state, sessionId };
}

export function setSupportedLanguages(state: ChatViewState, languages: string[]): ChatViewState {
  const supported = languages.length ? languages : ["en"];
  const language = supported.includes(state.language) ? state.language : "";
  return { ...state, supportedLanguages: supported, language };
}

/** Explicit selector choice; unsupported tags are ignored (filtered upstream too). */
export function setLanguage(state: ChatViewState, tag: string): ChatViewState {
  if (tag !== "" && !state.supportedLanguages.includes(tag)) return state;
  return { ...state, language: tag };
}

export interface SendAttempt {
  state: ChatViewState;
  accepted: boolean;
}

/** At most one in-flight request per session; further sends are blocked with a notice. */
export function beginSend(state: ChatViewState, text: string): SendAttempt {
  if (state.pending) {
    return {
      state: {
        ...state,
        messages: [
          ...state.messages,
          { sender: "notice", text: "Still waiting for the previous answer." },
        ],
      },
      accepted: false,
    };
  }
  if (!text.trim()) return { state, accepted: false };
  return {
    state: {
      ...state,
      pending: true,
      lastQuery: text,
      messages: [...state.messages, { sender: "user", text }],
    },
    accepted: true,
  };
}

export function completeSend(state: ChatViewState, response: RespondResponse): ChatViewState {
  return {
    ...state,
    pending: false,
    lastQuery: null,
    sessionId: response.session_id,
    messages: [
      ...state.messages,
      { sender: "assistant", text: response.answer, turnId: response.turn_id },
    ],
  };
}

export function failSend(state: ChatViewState, detail: string): ChatViewState {
  return {
    ...state,
    pending: false,
    messages: [
      ...state.messages,
      { sender: "error", text: `Request failed: ${detail}`, retryable: true },
    ],
  };
}

/** Rebuild the thread from /history after a refresh. */
export function resumeFromHistory(state: ChatViewState, turns: HistoryTurn[]): ChatViewState {
  const ordered = [...turns].sort((a, b) => a.turn_id - b.turn_id);
  const messages: Message[] = [];
  for (const turn of ordered) {
    messages.push({ sender: "user", text: turn.query, turnId: turn.turn_id });
    messages.push({ sender: "assistant", text: turn.answer, turnId: turn.turn_id });
  }
  return { ...state, messages, pending: false, trace: null };
}

/**
 * Trace panel contents for one turn. tasksUsed is the server list verbatim;
 * steps pair those names with the successful records' inputs/outputs in
 * execution order. Failed records keep their registry name and are marked.
 */
export function buildTraceView(turnId: number, trace: TraceResponse | null): TraceView {
  if (trace === null) {
    return { turnId, tasksUsed: [], steps: [], missing: true };
  }
  const steps: TraceStep[] = [];
  let used = 0;
  for (const record of trace.records) {
    if (record.failed) {
      steps.push({
        chatName: record.task_name,
        inputs: record.rendered_inputs,
        output: record.rendered_output,
        failed: true,
      });
      continue;
    }
    steps.push({
      chatName: trace.tasks_used[used] ?? record.task_name,
      inputs: record.rendered_inputs,
      output: record.rendered_output,
      failed: false,
    });
    used += 1;
  }
  return { turnId, tasksUsed: [...trace.tasks_used], steps, missing: false };
}

export function showTrace(state: ChatViewState, view: TraceView): ChatViewState {
  return { ...state, trace: view };
}

export function hideTrace(state: ChatViewState): ChatViewState {
  return { ...state, trace: null };
}

// -- datapipe badge segmentation --------------------------------------------

const REFERENCE_RE =
  /datapipe:[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}/g;

export interface TextSegment {
  kind: "text" | "reference";
  value: string;
}

/** Split output text so datapipe references can render as inert badges. */
export function segmentReferences(text: string): TextSegment[] {
  const segments: TextSegment[] = [];
  let cursor = 0;
  for (const match of text.matchAll(REFERENCE_RE)) {
    const start = match.index ?? 0;
    if (start > cursor) segments.push({ kind: "text", value: text.slice(cursor, start) });
    segments.push({ kind: "reference", value: match[0] });
    cursor = start + match[0].length;
  }
  if (cursor < text.length) segments.push({ kind: "text", value: text.slice(cursor) });
  if (segments.length === 0) segments.push({ kind: "text", value: "" });
  return segments;
}
