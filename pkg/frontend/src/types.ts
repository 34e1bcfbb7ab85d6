/**
 * Detections payload shared with the scenario-forge visual front-end.
 *
 * The authoritative contract is the vendored JSON schema in
 * schema/detections.schema.json (pinned copy of the primary repo's
 * docs/detections.schema.json). The zod schema below mirrors it so the
 * adapter can self-check every payload before writing.
 */

import { z } from "zod";

export const ACTOR_CLASSES = [
  "car",
  "truck",
  "bus",
  "train",
  "motorcycle",
  "bicycle",
  "pedestrian",
] as const;

export const BOX_CLASSES = [...ACTOR_CLASSES, "traffic_light", "traffic_sign"] as const;

export type BoxClass = (typeof BOX_CLASSES)[number];

export const boxSchema = z
  .object({
    class: z.enum(BOX_CLASSES),
    bbox: z.tuple([
      z.number().min(0),
      z.number().min(0),
      z.number().min(0),
      z.number().min(0),
    ]),
    confidence: z.number().min(0).max(1),
    light_state: z.enum(["red", "green"]).optional(),
    sign_kind: z.enum(["stop_sign", "speed_limit_sign"]).optional(),
  })
  .strict();

export const detectionsSchema = z
  .object({
    image_size: z.tuple([z.number().int().min(1), z.number().int().min(1)]),
    boxes: z.array(boxSchema),
    lane_boundaries: z.array(
      z.array(z.tuple([z.number().min(0), z.number().min(0)])).min(2),
    ),
  })
  .strict();

export type Box = z.infer<typeof boxSchema>;
export type Detections = z.infer<typeof detectionsSchema>;

/** Raw output of whatever object-detection model backs the adapter. */
export interface RawDetection {
  label: string;
  bbox: [number, number, number, number];
  confidence: number;
  lightState?: "red" | "green";
}

/** Raw lane-model output: one point set per detected boundary. */
export type RawLaneLine = Array<[number, number]>;

export class SchemaSelfCheckError extends Error {}

/** Validate a payload against both geometry invariants and the schema. */
export function selfCheck(payload: Detections): Detections {
  const parsed = detectionsSchema.safeParse(payload);
  if (!parsed.success) {
    throw new SchemaSelfCheckError(parsed.error.message);
  }
  const [width, height] = payload.image_size;
  for (const box of payload.boxes) {
    const [x0, y0, x1, y1] = box.bbox;
    if (!(x0 < x1 && y0 < y1) || x1 > width || y1 > height) {
      throw new SchemaSelfCheckError(`box out of bounds: ${JSON.stringify(box.bbox)}`);
    }
  }
  for (const line of payload.lane_boundaries) {
    for (let i = 1; i < line.length; i++) {
      if (line[i][1] <= line[i - 1][1]) {
        throw new SchemaSelfCheckError("lane boundary must be strictly increasing in y");
      }
    }
    for (const [x, y] of line) {
      if (x > width || y > height) {
        throw new SchemaSelfCheckError("lane boundary point out of bounds");
      }
    }
  }
  return payload;
}
