/** Push-to-talk recording at the pipeline's fixed 16 kHz mono rate.
 *
 * Stub-backend servers recognize audio by its embedded transcript tag, so
 * recordings are encoded as PCM WAV with an optional LIST/INFO ICMT
 * comment carrying the phrase being spoken.
 */

export const RECORD_SAMPLE_RATE = 16000;

export function floatTo16BitPcm(samples: Float32Array): Int16Array {
  const out = new Int16Array(samples.length);
  for (let i = 0; i < samples.length; i++) {
    const clamped = Math.max(-1, Math.min(1, samples[i]));
    out[i] = Math.round(clamped * 32767);
  }
  return out;
}

function ascii(text: string): Uint8Array {
  const bytes = new Uint8Array(text.length);
  for (let i = 0; i < text.length; i++) bytes[i] = text.charCodeAt(i);
  return bytes;
}

function u32(value: number): Uint8Array {
  const bytes = new Uint8Array(4);
  new DataView(bytes.buffer).setUint32(0, value, true);
  return bytes;
}

function u16(value: number): Uint8Array {
  const bytes = new Uint8Array(2);
  new DataView(bytes.buffer).setUint16(0, value, true);
  return bytes;
}

function concat(parts: Uint8Array[]): Uint8Array {
  const total = parts.reduce((n, p) => n + p.length, 0);
  const out = new Uint8Array(total);
  let offset = 0;
  for (const part of parts) {
    out.set(part, offset);
    offset += part.length;
  }
  return out;
}

function pad(bytes: Uint8Array): Uint8Array {
  return bytes.length % 2 ? concat([bytes, new Uint8Array(1)]) : bytes;
}

/** Mono 16-bit PCM WAV; transcript (if given) goes into LIST/INFO ICMT. */
export function encodeTaggedWav(
  samples: Int16Array,
  sampleRate: number = RECORD_SAMPLE_RATE,
  transcript?: string,
): Uint8Array {
  const data = new Uint8Array(samples.length * 2);
  const view = new DataView(data.buffer);
  for (let i = 0; i < samples.length; i++) view.setInt16(2 * i, samples[i], true);

  const fmt = concat([
    u16(1), // PCM
    u16(1), // mono
    u32(sampleRate),
    u32(sampleRate * 2),
    u16(2),
    u16(16),
  ]);
  const chunks: Uint8Array[] = [ascii("fmt "), u32(fmt.length), pad(fmt)];
  if (transcript) {
    const comment = concat([new TextEncoder().encode(transcript), new Uint8Array(1)]);
    const info = concat([ascii("INFO"), ascii("ICMT"), u32(comment.length), pad(comment)]);
    chunks.push(ascii("LIST"), u32(info.length), pad(info));
  }
  chunks.push(ascii("data"), u32(data.length), pad(data));
  const body = concat([ascii("WAVE"), ...chunks]);
  return concat([ascii("RIFF"), u32(body.length), body]);
}

/** Microphone capture; browser-only (ScriptProcessor keeps it dependency-free). */
export class PushToTalkRecorder {
  private context: AudioContext | null = null;
  private stream: MediaStream | null = null;
  private processor: ScriptProcessorNode | null = null;
  private buffers: Float32Array[] = [];

  async start(): Promise<void> {
    this.stream = await navigator.mediaDevices.getUserMedia({ audio: true });
    this.context = new AudioContext({ sampleRate: RECORD_SAMPLE_RATE });
    const source = this.context.createMediaStreamSource(this.stream);
    this.processor = this.context.createScriptProcessor(4096, 1, 1);
    this.buffers = [];
    this.processor.onaudioprocess = (event) => {
      this.buffers.push(new Float32Array(event.inputBuffer.getChannelData(0)));
    };
    source.connect(this.processor);
    this.processor.connect(this.context.destination);
  }

  /** Stop capturing and return a WAV tagged with the phrase, if any. */
  async stop(transcript?: string): Promise<Uint8Array> {
    this.processor?.disconnect();
    this.stream?.getTracks().forEach((track) => track.stop());
    await this.context?.close();
    const total = this.buffers.reduce((n, b) => n + b.length, 0);
    const joined = new Float32Array(total);
    let offset = 0;
    for (const buffer of this.buffers) {
      joined.set(buffer, offset);
      offset += buffer.length;
    }
    this.buffers = [];
    return encodeTaggedWav(floatTo16BitPcm(joined), RECORD_SAMPLE_RATE, transcript);
  }
}
