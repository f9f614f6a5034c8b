/** Latency dashboard model: most recent session plus rolling means.
 *
 * Values are stored exactly as the server sent them; formatting happens
 * only at render time, so the dashboard numbers stay byte-equal to the
 * /metrics payload.
 */

import type { MetricsPayload } from "./wire.js";

export const METRIC_KEYS = [
  "asr_time_per_audio_second",
  "llm_tokens_per_second",
  "tts_time_per_audio_second",
  "frame_drive_time",
] as const;

export type MetricKey = (typeof METRIC_KEYS)[number];

export const DASHBOARD_ROWS: { key: MetricKey; module: string; label: string; unit: string }[] = [
  { key: "asr_time_per_audio_second", module: "ASR", label: "Time required to recognize 1s audio", unit: "s" },
  { key: "llm_tokens_per_second", module: "LLM (including RAG)", label: "Tokens generated per second", unit: "tokens/s" },
  { key: "tts_time_per_audio_second", module: "TTS", label: "Time required to synthesize 1s audio", unit: "s" },
  { key: "frame_drive_time", module: "Talking-Head Generation", label: "Time required to drive one frame", unit: "s" },
];

export class LatencyDashboard {
  private sessions: MetricsPayload[] = [];

  ingest(metrics: MetricsPayload): void {
    this.sessions.push(pick(metrics));
  }

  /** Replace history from a /metrics document's session list. */
  loadFeed(sessions: MetricsPayload[]): void {
    this.sessions = sessions.map(pick);
  }

  get latest(): MetricsPayload | null {
    return this.sessions.length ? this.sessions[this.sessions.length - 1] : null;
  }

  get sessionCount(): number {
    return this.sessions.length;
  }

  /** Mean over sessions where the field is defined (the server's rule). */
  rollingMeans(): Partial<Record<MetricKey, number>> {
    const means: Partial<Record<MetricKey, number>> = {};
    for (const key of METRIC_KEYS) {
      const values = this.sessions
        .map((s) => s[key])
        .filter((v): v is number => v !== null && v !== undefined);
      if (values.length) {
        means[key] = values.reduce((a, b) => a + b, 0) / values.length;
      }
    }
    return means;
  }

  /** Raw latest values serialized in metric-key order (fidelity probe). */
  latestJson(): string {
    const latest = this.latest;
    if (!latest) return "null";
    return JSON.stringify(Object.fromEntries(METRIC_KEYS.map((k) => [k, latest[k]])));
  }
}

function pick(metrics: MetricsPayload): MetricsPayload {
  return {
    asr_time_per_audio_second: metrics.asr_time_per_audio_second ?? null,
    llm_tokens_per_second: metrics.llm_tokens_per_second ?? null,
    tts_time_per_audio_second: metrics.tts_time_per_audio_second ?? null,
    frame_drive_time: metrics.frame_drive_time ?? null,
  };
}

export function formatMetric(value: number | null | undefined, unit: string): string {
  if (value === null || value === undefined) return "—";
  const digits = unit === "tokens/s" ? 2 : 5;
  return `${value.toFixed(digits)} ${unit}`;
}
