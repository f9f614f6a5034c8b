/** Wire protocol types and payload decoding for the /session stream. */

export const PROTOCOL_VERSION = "v1";

export type EventType =
  | "transcript"
  | "context"
  | "token"
  | "sentence"
  | "audio"
  | "frame"
  | "metrics"
  | "end"
  | "error";

export interface WireEvent {
  type: EventType;
  seq: number;
  payload: Record<string, unknown>;
}

export interface HelloMessage {
  type: "hello";
  protocol: string;
}

export interface ContextChunk {
  chunk_id: string;
  score: number;
  book_title?: string;
  page_number?: number;
  text?: string;
}

export interface AudioPayload {
  data_b64: string;
  sample_rate: number;
  seq: number;
  sentence_seq: number;
}

export interface FramePayload {
  frame_index: number;
  presentation_time: number;
  sentence_seq: number;
}

export interface MetricsPayload {
  asr_time_per_audio_second: number | null;
  llm_tokens_per_second: number | null;
  tts_time_per_audio_second: number | null;
  frame_drive_time: number | null;
}

export function isHello(message: unknown): message is HelloMessage {
  return (
    typeof message === "object" &&
    message !== null &&
    (message as { type?: unknown }).type === "hello"
  );
}

export function parseWireEvent(message: unknown): WireEvent {
  const record = message as { type?: unknown; seq?: unknown; payload?: unknown };
  if (typeof record?.type !== "string" || typeof record?.seq !== "number") {
    throw new Error(`not a wire event: ${JSON.stringify(message).slice(0, 120)}`);
  }
  return {
    type: record.type as EventType,
    seq: record.seq,
    payload: (record.payload ?? {}) as Record<string, unknown>,
  };
}

function base64ToBytes(b64: string): Uint8Array {
  if (typeof atob === "function") {
    const binary = atob(b64);
    const bytes = new Uint8Array(binary.length);
    for (let i = 0; i < binary.length; i++) bytes[i] = binary.charCodeAt(i);
    return bytes;
  }
  // Node (tests) without pulling node typings into the browser build.
  const nodeBuffer = (globalThis as { Buffer?: { from(data: string, encoding: string): Uint8Array } }).Buffer;
  if (!nodeBuffer) throw new Error("no base64 decoder available");
  return Uint8Array.from(nodeBuffer.from(b64, "base64"));
}

/** Little-endian 16-bit PCM out of the audio payload. */
export function decodePcm(data_b64: string): Int16Array {
  const bytes = base64ToBytes(data_b64);
  const samples = new Int16Array(bytes.length >> 1);
  for (let i = 0; i < samples.length; i++) {
    const lo = bytes[2 * i];
    const hi = bytes[2 * i + 1];
    const value = lo | (hi << 8);
    samples[i] = value >= 0x8000 ? value - 0x10000 : value;
  }
  return samples;
}

export function pcmToFloat32(samples: Int16Array): Float32Array {
  const out = new Float32Array(samples.length);
  for (let i = 0; i < samples.length; i++) out[i] = samples[i] / 32768;
  return out;
}
