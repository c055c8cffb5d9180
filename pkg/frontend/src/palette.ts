/** Deterministic edge colors: golden-angle hue steps keep neighbors apart
 * and never repeat for realistic edge counts. */

export function edgeColor(index: number): string {
  const hue = (index * 137.508) % 360;
  return `hsl(${hue.toFixed(2)}, 68%, 44%)`;
}
