/** WebSocket session client: one in-flight request per connection. */

import { isHello, parseWireEvent } from "./wire.js";
import type { WireEvent } from "./wire.js";
import type { ConnectionStatus } from "./state.js";

export interface SessionCallbacks {
  onStatus(status: ConnectionStatus): void;
  onEvent(event: WireEvent): void;
  onProtocol?(protocol: string): void;
}

export type WebSocketFactory = (url: string) => WebSocket;

const SOCKET_OPEN = 1; // WebSocket.OPEN without requiring the global at runtime

export class SessionClient {
  private ws: WebSocket | null = null;
  private helloSeen = false;

  constructor(
    private url: string,
    private callbacks: SessionCallbacks,
    private factory: WebSocketFactory = (url) => new WebSocket(url),
  ) {}

  connect(): void {
    this.callbacks.onStatus("connecting");
    const ws = this.factory(this.url);
    ws.binaryType = "arraybuffer";
    ws.onopen = () => this.callbacks.onStatus("connected");
    ws.onclose = () => this.callbacks.onStatus("disconnected");
    ws.onerror = () => this.callbacks.onStatus("failed");
    ws.onmessage = (message: MessageEvent) => {
      if (typeof message.data !== "string") return;
      const parsed = JSON.parse(message.data);
      if (isHello(parsed)) {
        this.helloSeen = true;
        this.callbacks.onProtocol?.(parsed.protocol);
        return;
      }
      this.callbacks.onEvent(parseWireEvent(parsed));
    };
    this.ws = ws;
  }

  get ready(): boolean {
    return this.ws !== null && this.ws.readyState === SOCKET_OPEN && this.helloSeen;
  }

  sendText(query: string): void {
    this.requireSocket().send(JSON.stringify({ query_text: query }));
  }

  sendAudio(wav: Uint8Array, frameBytes = 32768): void {
    const ws = this.requireSocket();
    for (let offset = 0; offset < wav.length; offset += frameBytes) {
      ws.send(wav.slice(offset, offset + frameBytes));
    }
    ws.send(JSON.stringify({ audio_end: true }));
  }

  close(): void {
    this.ws?.close();
    this.ws = null;
  }

  private requireSocket(): WebSocket {
    if (!this.ws || this.ws.readyState !== SOCKET_OPEN) {
      throw new Error("session socket is not open");
    }
    return this.ws;
  }
}

export function defaultSessionUrl(location: Location): string {
  const scheme = location.protocol === "https:" ? "wss:" : "ws:";
  return `${scheme}//${location.host}/session`;
}
