/** Session view state: a pure reducer over decoded wire events.
 *
 * The token pane is a prefix-consistent accumulation of "token" events and
 * the context panel preserves server rank order; envelope seq continuity is
 * enforced so a dropped or reordered event fails loudly instead of
 * rendering a silently wrong transcript.
 */

import type { ContextChunk, MetricsPayload, WireEvent } from "./wire.js";

export type ConnectionStatus = "disconnected" | "connecting" | "connected" | "failed";

export interface SessionViewState {
  connection: ConnectionStatus;
  currentQuery: string;
  transcript: string | null;
  tokenText: string;
  tokenCount: number;
  sentences: string[];
  keywords: string[];
  contextChunks: ContextChunk[];
  audioBlocks: number;
  audioSamples: number;
  frameCount: number;
  lastFrameIndex: number | null;
  metrics: MetricsPayload | null;
  ended: boolean;
  error: { stage: string; message: string } | null;
  lastSeq: number;
}

export function initialSessionState(): SessionViewState {
  return {
    connection: "disconnected",
    currentQuery: "",
    transcript: null,
    tokenText: "",
    tokenCount: 0,
    sentences: [],
    keywords: [],
    contextChunks: [],
    audioBlocks: 0,
    audioSamples: 0,
    frameCount: 0,
    lastFrameIndex: null,
    metrics: null,
    ended: false,
    error: null,
    lastSeq: -1,
  };
}

export function applyEvent(state: SessionViewState, event: WireEvent): SessionViewState {
  if (event.seq !== state.lastSeq + 1) {
    throw new Error(`wire seq gap: expected ${state.lastSeq + 1}, got ${event.seq}`);
  }
  const next: SessionViewState = { ...state, lastSeq: event.seq };
  const payload = event.payload;
  switch (event.type) {
    case "transcript":
      next.transcript = payload.text as string;
      break;
    case "context":
      next.keywords = (payload.keywords as string[]) ?? [];
      next.contextChunks = (payload.chunks as ContextChunk[]) ?? [];
      break;
    case "token": {
      const text = payload.text as string;
      const seq = payload.seq as number;
      if (seq !== next.tokenCount) {
        throw new Error(`token seq gap: expected ${next.tokenCount}, got ${seq}`);
      }
      next.tokenText = state.tokenText + text;
      next.tokenCount = state.tokenCount + 1;
      break;
    }
    case "sentence":
      next.sentences = [...state.sentences, payload.text as string];
      break;
    case "audio": {
      const byteLength = ((payload.data_b64 as string) ?? "").length;
      next.audioBlocks = state.audioBlocks + 1;
      // 4 base64 chars encode 3 bytes; 2 bytes per sample.
      next.audioSamples = state.audioSamples + Math.floor((byteLength * 3) / 4 / 2);
      break;
    }
    case "frame":
      next.frameCount = state.frameCount + 1;
      next.lastFrameIndex = payload.frame_index as number;
      break;
    case "metrics":
      next.metrics = payload as unknown as MetricsPayload;
      break;
    case "end":
      next.ended = true;
      break;
    case "error":
      next.error = {
        stage: payload.stage as string,
        message: payload.message as string,
      };
      break;
    default:
      // Future event types render nowhere but must not corrupt the panes.
      break;
  }
  return next;
}

export function replayLog(events: WireEvent[]): SessionViewState {
  let state = initialSessionState();
  state = { ...state, connection: "connected" };
  for (const event of events) {
    state = applyEvent(state, event);
  }
  return state;
}
