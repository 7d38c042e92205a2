/** Number presentation shared by the rating panel and the evaluation view. */

/** Render a service-reported statistic: trim to at most two decimals. */
export function formatScore(value: number): string {
  return String(Number(value.toFixed(2)));
}

export function formatMs(value: number): string {
  return `${Math.round(value)} ms`;
}
