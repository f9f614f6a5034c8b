/** Gapless PCM playback with a strict no-skip no-duplicate queue.
 *
 * Blocks must arrive in audio seq order; the queue refuses gaps and
 * duplicates so a transport bug surfaces immediately rather than as a
 * glitch. The sink schedules each block back to back on a running clock.
 */

import { decodePcm, pcmToFloat32 } from "./wire.js";
import type { AudioPayload } from "./wire.js";

export interface AudioSink {
  schedule(samples: Float32Array, sampleRate: number): void;
}

export class PlaybackQueue {
  private played: number[] = [];
  private lastEnergy = 0;

  constructor(private sink: AudioSink) {}

  enqueue(payload: AudioPayload): void {
    const expected = this.played.length;
    if (payload.seq < expected) {
      throw new Error(`duplicate audio block seq ${payload.seq}`);
    }
    if (payload.seq > expected) {
      throw new Error(`audio block gap: expected seq ${expected}, got ${payload.seq}`);
    }
    const pcm = decodePcm(payload.data_b64);
    this.sink.schedule(pcmToFloat32(pcm), payload.sample_rate);
    this.played.push(payload.seq);
    this.lastEnergy = rmsEnergy(pcm);
  }

  /** Seqs in the exact order they were scheduled. */
  get playedSequence(): number[] {
    return [...this.played];
  }

  /** Normalized RMS of the most recent block (drives the avatar mouth). */
  get latestEnergy(): number {
    return this.lastEnergy;
  }
}

export function rmsEnergy(samples: Int16Array): number {
  if (samples.length === 0) return 0;
  let sumSquares = 0;
  for (let i = 0; i < samples.length; i++) {
    const v = samples[i] / 32768;
    sumSquares += v * v;
  }
  return Math.sqrt(sumSquares / samples.length);
}

/** Web Audio sink: schedules blocks contiguously on the context clock. */
export class WebAudioSink implements AudioSink {
  private context: AudioContext;
  private nextStartTime = 0;

  constructor(context?: AudioContext) {
    this.context = context ?? new AudioContext();
  }

  schedule(samples: Float32Array, sampleRate: number): void {
    const buffer = this.context.createBuffer(1, samples.length, sampleRate);
    buffer.copyToChannel(new Float32Array(samples), 0);
    const source = this.context.createBufferSource();
    source.buffer = buffer;
    source.connect(this.context.destination);
    this.nextStartTime = Math.max(this.nextStartTime, this.context.currentTime);
    source.start(this.nextStartTime);
    this.nextStartTime += buffer.duration;
  }
}
