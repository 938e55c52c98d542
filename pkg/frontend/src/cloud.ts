/**
 * Tag-cloud sizing: a linear map from document count to font size.
 * The largest count in a panel renders at MAX_FONT_PX, the smallest at
 * MIN_FONT_PX; a panel where every count is equal renders mid-scale.
 */

export const MIN_FONT_PX = 12;
export const MAX_FONT_PX = 32;

export function fontSizeFor(count: number, minCount: number, maxCount: number): number {
  if (maxCount <= minCount) {
    return (MIN_FONT_PX + MAX_FONT_PX) / 2;
  }
  const clamped = Math.min(Math.max(count, minCount), maxCount);
  const t = (clamped - minCount) / (maxCount - minCount);
  return MIN_FONT_PX + t * (MAX_FONT_PX - MIN_FONT_PX);
}
