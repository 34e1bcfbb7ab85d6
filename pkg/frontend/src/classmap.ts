/**
 * Mapping from raw detector labels to the shared detections classes.
 *
 * The default object model is COCO-trained; eleven of its classes matter
 * for traffic scenes. Anything unmapped is dropped with a logged reason,
 * so the mapping is total over arbitrary model outputs.
 */

import type { Box, RawDetection } from "./types.js";

interface Mapped {
  cls: Box["class"];
  signKind?: "stop_sign" | "speed_limit_sign";
}

const COCO_TO_SHARED: Record<string, Mapped> = {
  person: { cls: "pedestrian" },
  bicycle: { cls: "bicycle" },
  car: { cls: "car" },
  motorcycle: { cls: "motorcycle" },
  bus: { cls: "bus" },
  train: { cls: "train" },
  truck: { cls: "truck" },
  "traffic light": { cls: "traffic_light" },
  "stop sign": { cls: "traffic_sign", signKind: "stop_sign" },
  // Detected but inexpressible in the scenario grammar: dropped, logged.
  "parking meter": undefined as unknown as Mapped,
  "fire hydrant": undefined as unknown as Mapped,
};

export const RELEVANT_RAW_LABELS = Object.keys(COCO_TO_SHARED);

export interface MapResult {
  boxes: Box[];
  dropped: Array<{ label: string; reason: string }>;
}

export function mapDetections(raw: RawDetection[], log: (line: string) => void = () => {}): MapResult {
  const boxes: Box[] = [];
  const dropped: Array<{ label: string; reason: string }> = [];
  for (const detection of raw) {
    const label = detection.label.toLowerCase();
    if (!(label in COCO_TO_SHARED)) {
      dropped.push({ label, reason: "not a traffic-scene class" });
      log(`dropped '${label}': not a traffic-scene class`);
      continue;
    }
    const mapped = COCO_TO_SHARED[label];
    if (!mapped) {
      dropped.push({ label, reason: "no scenario-grammar counterpart" });
      log(`dropped '${label}': no scenario-grammar counterpart`);
      continue;
    }
    const box: Box = {
      class: mapped.cls,
      bbox: detection.bbox,
      confidence: detection.confidence,
    };
    if (mapped.cls === "traffic_light" && detection.lightState) {
      box.light_state = detection.lightState;
    }
    if (mapped.signKind) {
      box.sign_kind = mapped.signKind;
    }
    boxes.push(box);
  }
  return { boxes, dropped };
}
