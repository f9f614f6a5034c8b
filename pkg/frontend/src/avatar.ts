/** Avatar placeholder: frame counter plus a mouth state derived from audio
 * energy. A clearly labeled stand-in for real lip-synced video. */

export type MouthState = "closed" | "half" | "open";

export function mouthState(energy: number): MouthState {
  if (energy >= 0.12) return "open";
  if (energy >= 0.03) return "half";
  return "closed";
}

export interface AvatarView {
  frameIndex: number | null;
  framesSeen: number;
  mouth: MouthState;
}

export function avatarView(
  frameIndex: number | null,
  framesSeen: number,
  energy: number,
): AvatarView {
  return { frameIndex, framesSeen, mouth: mouthState(energy) };
}
