/** DOM wiring for the console: panes update as wire events arrive. */

import { avatarView } from "./avatar.js";
import { SessionClient, defaultSessionUrl } from "./client.js";
import { DASHBOARD_ROWS, LatencyDashboard, formatMetric } from "./dashboard.js";
import { PlaybackQueue, WebAudioSink } from "./playback.js";
import { PushToTalkRecorder } from "./recorder.js";
import { RATING_DIMENSIONS, submitRating, validScore } from "./ratings.js";
import { applyEvent, initialSessionState } from "./state.js";
import type { SessionViewState } from "./state.js";
import type { AudioPayload, WireEvent } from "./wire.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

let state: SessionViewState = initialSessionState();
let playback: PlaybackQueue | null = null;
let client: SessionClient | null = null;
let recorder: PushToTalkRecorder | null = null;
const dashboard = new LatencyDashboard();
let lastSessionId = "";
let inFlight = false;

function setBanner(text: string | null): void {
  const banner = el<HTMLDivElement>("error-banner");
  banner.textContent = text ?? "";
  banner.classList.toggle("visible", text !== null);
}

function renderStatus(): void {
  el<HTMLSpanElement>("connection-status").textContent = state.connection;
  el<HTMLSpanElement>("connection-status").dataset.status = state.connection;
}

function renderTranscriptPanes(): void {
  el<HTMLDivElement>("asr-pane").textContent = state.transcript ?? "";
  el<HTMLDivElement>("token-pane").textContent = state.tokenText;
  const list = el<HTMLUListElement>("sentence-list");
  list.replaceChildren(
    ...state.sentences.map((sentence) => {
      const item = document.createElement("li");
      item.textContent = sentence;
      return item;
    }),
  );
}

function renderContext(): void {
  const panel = el<HTMLOListElement>("context-panel");
  panel.replaceChildren(
    ...state.contextChunks.map((chunk) => {
      const item = document.createElement("li");
      const provenance = document.createElement("span");
      provenance.className = "provenance";
      provenance.textContent = `《${chunk.book_title ?? "?"}》第${chunk.page_number ?? "?"}页 · ${chunk.score}`;
      const body = document.createElement("span");
      body.className = "chunk-text";
      body.textContent = chunk.text ?? chunk.chunk_id;
      item.append(provenance, body);
      return item;
    }),
  );
  el<HTMLDivElement>("keywords").textContent = state.keywords.join(" · ");
}

function renderAvatar(): void {
  const view = avatarView(state.lastFrameIndex, state.frameCount, playback?.latestEnergy ?? 0);
  el<HTMLDivElement>("avatar-frame").textContent =
    view.frameIndex === null ? "—" : `frame ${view.frameIndex} (${view.framesSeen} seen)`;
  const mouth = el<HTMLDivElement>("avatar-mouth");
  mouth.dataset.mouth = view.mouth;
}

function renderDashboard(): void {
  const table = el<HTMLTableSectionElement>("dashboard-body");
  const latest = dashboard.latest;
  const means = dashboard.rollingMeans();
  table.replaceChildren(
    ...DASHBOARD_ROWS.map((row) => {
      const tr = document.createElement("tr");
      const name = document.createElement("td");
      name.textContent = row.module;
      const metric = document.createElement("td");
      metric.textContent = row.label;
      const recent = document.createElement("td");
      const raw = latest ? latest[row.key] : null;
      recent.textContent = formatMetric(raw, row.unit);
      if (raw !== null && raw !== undefined) recent.dataset.raw = String(raw);
      const mean = document.createElement("td");
      mean.textContent = formatMetric(means[row.key] ?? null, row.unit);
      tr.append(name, metric, recent, mean);
      return tr;
    }),
  );
  el<HTMLSpanElement>("dashboard-sessions").textContent = String(dashboard.sessionCount);
}

function renderAll(): void {
  renderStatus();
  renderTranscriptPanes();
  renderContext();
  renderAvatar();
  renderDashboard();
}

function handleEvent(event: WireEvent): void {
  state = applyEvent(state, event);
  if (event.type === "audio" && playback) {
    playback.enqueue(event.payload as unknown as AudioPayload);
  }
  if (event.type === "metrics") {
    dashboard.ingest(state.metrics!);
  }
  if (event.type === "error") {
    setBanner(`stage ${state.error!.stage} failed: ${state.error!.message}`);
  }
  if (event.type === "end") {
    inFlight = false;
    lastSessionId = `local-${Date.now()}`;
  }
  renderAll();
}

function beginRequest(query: string): boolean {
  if (!client?.ready) {
    setBanner("not connected");
    return false;
  }
  if (inFlight) {
    setBanner("a request is already streaming");
    return false;
  }
  const previousConnection = state.connection;
  state = { ...initialSessionState(), connection: previousConnection, currentQuery: query };
  playback = new PlaybackQueue(new WebAudioSink());
  setBanner(null);
  inFlight = true;
  renderAll();
  return true;
}

function sendTextQuery(): void {
  const input = el<HTMLInputElement>("query-input");
  const query = input.value.trim();
  if (!query) {
    setBanner("enter a question first");
    return;
  }
  if (!beginRequest(query)) return;
  client!.sendText(query);
}

async function toggleTalk(button: HTMLButtonElement): Promise<void> {
  if (!recorder) {
    recorder = new PushToTalkRecorder();
    try {
      await recorder.start();
      button.classList.add("recording");
      button.textContent = "■ release to send";
    } catch (error) {
      recorder = null;
      setBanner(`microphone unavailable: ${String(error)}`);
    }
    return;
  }
  const phrase = el<HTMLInputElement>("phrase-input").value.trim() || undefined;
  const wav = await recorder.stop(phrase);
  recorder = null;
  button.classList.remove("recording");
  button.textContent = "🎙 hold to talk";
  if (!beginRequest(phrase ?? "(voice)")) return;
  client!.sendAudio(wav);
}

async function sendRating(): Promise<void> {
  const dimension = el<HTMLSelectElement>("rating-dimension").value;
  const score = Number(el<HTMLSelectElement>("rating-score").value);
  const note = el<HTMLSpanElement>("rating-status");
  if (!lastSessionId) {
    note.textContent = "complete a session first";
    return;
  }
  if (!validScore(score)) {
    note.textContent = "score must be 1–5";
    return;
  }
  const result = await submitRating("", {
    session_id: lastSessionId,
    dimension: dimension as never,
    score,
    rater_id: "console",
  });
  note.textContent = result.ok ? "saved ✓" : `rejected: ${result.error}`;
}

async function refreshDashboardFromServer(): Promise<void> {
  try {
    const doc = (await (await fetch("/metrics")).json()) as { sessions: never[] };
    dashboard.loadFeed(doc.sessions);
    renderDashboard();
  } catch {
    // server metrics unavailable; local feed remains
  }
}

function boot(): void {
  const dimensionSelect = el<HTMLSelectElement>("rating-dimension");
  dimensionSelect.replaceChildren(
    ...RATING_DIMENSIONS.map((dimension) => {
      const option = document.createElement("option");
      option.value = dimension;
      option.textContent = dimension;
      return option;
    }),
  );

  client = new SessionClient(defaultSessionUrl(window.location), {
    onStatus: (status) => {
      state = { ...state, connection: status };
      if (status === "failed" || status === "disconnected") {
        if (inFlight) setBanner("connection lost; session failed");
        inFlight = false;
      }
      renderStatus();
    },
    onEvent: handleEvent,
  });
  client.connect();

  el<HTMLButtonElement>("send-button").addEventListener("click", sendTextQuery);
  el<HTMLInputElement>("query-input").addEventListener("keydown", (event) => {
    if (event.key === "Enter") sendTextQuery();
  });
  const talk = el<HTMLButtonElement>("talk-button");
  talk.addEventListener("click", () => void toggleTalk(talk));
  el<HTMLButtonElement>("rating-submit").addEventListener("click", () => void sendRating());
  el<HTMLButtonElement>("metrics-refresh").addEventListener("click", () => void refreshDashboardFromServer());

  renderAll();
}

document.addEventListener("DOMContentLoaded", boot);
