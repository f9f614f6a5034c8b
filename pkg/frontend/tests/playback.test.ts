/** Criterion: audio blocks play in seq order, none skipped or duplicated. */

import { describe, expect, it } from "vitest";

import { PlaybackQueue, rmsEnergy } from "../src/playback.js";
import type { AudioSink } from "../src/playback.js";
import type { AudioPayload } from "../src/wire.js";
import { loadGoldenLog } from "./golden.js";

class RecordingSink implements AudioSink {
  blocks: { samples: Float32Array; sampleRate: number }[] = [];
  schedule(samples: Float32Array, sampleRate: number): void {
    this.blocks.push({ samples, sampleRate });
  }
}

const golden = loadGoldenLog();
const audioPayloads = golden.events
  .filter((e) => e.type === "audio")
  .map((e) => e.payload as unknown as AudioPayload);

describe("playback queue over the golden log", () => {
  it("plays every block in seq order", () => {
    const sink = new RecordingSink();
    const queue = new PlaybackQueue(sink);
    for (const payload of audioPayloads) queue.enqueue(payload);
    expect(queue.playedSequence).toEqual(audioPayloads.map((p) => p.seq));
    expect(queue.playedSequence).toEqual([...Array(audioPayloads.length).keys()]);
    expect(sink.blocks.length).toBe(audioPayloads.length);
    expect(sink.blocks.every((b) => b.sampleRate === 16000)).toBe(true);
  });

  it("decoded sample counts match the base64 payload sizes", () => {
    const sink = new RecordingSink();
    const queue = new PlaybackQueue(sink);
    for (const payload of audioPayloads) queue.enqueue(payload);
    const scheduled = sink.blocks.reduce((n, b) => n + b.samples.length, 0);
    const expected = audioPayloads.reduce(
      (n, p) => n + Buffer.from(p.data_b64, "base64").length / 2,
      0,
    );
    expect(scheduled).toBe(expected);
  });

  it("refuses a skipped block", () => {
    const queue = new PlaybackQueue(new RecordingSink());
    queue.enqueue(audioPayloads[0]);
    expect(() => queue.enqueue(audioPayloads[2])).toThrow(/gap/);
  });

  it("refuses a duplicated block", () => {
    const queue = new PlaybackQueue(new RecordingSink());
    queue.enqueue(audioPayloads[0]);
    expect(() => queue.enqueue(audioPayloads[0])).toThrow(/duplicate/);
  });

  it("tracks block energy for the avatar", () => {
    const sink = new RecordingSink();
    const queue = new PlaybackQueue(sink);
    queue.enqueue(audioPayloads[0]);
    expect(queue.latestEnergy).toBeGreaterThan(0); // 440 Hz tone, not silence
    expect(rmsEnergy(new Int16Array(100))).toBe(0);
  });
});
