/**
 * Lane-polyline conditioning: the lane model emits dense per-lane point
 * sets; the shared format wants y-monotone polylines of at most 50 points.
 */

import type { RawLaneLine } from "./types.js";

export const MAX_POLYLINE_POINTS = 50;

/** Sort by y, drop duplicate rows, downsample evenly to the point budget. */
export function conditionPolyline(points: RawLaneLine, maxPoints = MAX_POLYLINE_POINTS): RawLaneLine {
  const sorted = [...points].sort((a, b) => a[1] - b[1]);
  const monotone: RawLaneLine = [];
  for (const point of sorted) {
    const last = monotone[monotone.length - 1];
    if (last && point[1] <= last[1]) continue;
    monotone.push(point);
  }
  if (monotone.length <= maxPoints) return monotone;
  const out: RawLaneLine = [];
  for (let i = 0; i < maxPoints; i++) {
    const index = Math.round((i * (monotone.length - 1)) / (maxPoints - 1));
    out.push(monotone[index]);
  }
  return out;
}

export function conditionBoundaries(lines: RawLaneLine[], maxPoints = MAX_POLYLINE_POINTS): RawLaneLine[] {
  return lines.map((line) => conditionPolyline(line, maxPoints)).filter((line) => line.length >= 2);
}
