/** Rating submission against the gateway's /ratings endpoint. */

export const RATING_DIMENSIONS = [
  "Professionalism",
  "Informativeness",
  "LogicalCoherence",
  "Fluency",
] as const;

export type RatingDimension = (typeof RATING_DIMENSIONS)[number];

export interface RatingSubmission {
  session_id: string;
  dimension: RatingDimension;
  score: number;
  rater_id: string;
}

export interface RatingResult {
  ok: boolean;
  error?: string;
}

export async function submitRating(
  baseUrl: string,
  submission: RatingSubmission,
  fetchImpl: typeof fetch = fetch,
): Promise<RatingResult> {
  const response = await fetchImpl(`${baseUrl}/ratings`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(submission),
  });
  if (response.ok) return { ok: true };
  let detail = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as { error?: string };
    if (body.error) detail = body.error;
  } catch {
    // keep the HTTP status message
  }
  return { ok: false, error: detail };
}

/** Client-side guard mirroring the server's range rule. */
export function validScore(score: number): boolean {
  return Number.isInteger(score) && score >= 1 && score <= 5;
}
