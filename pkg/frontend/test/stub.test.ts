import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { runDetect } from "../src/cli.js";
import { ImageError, StubDetector } from "../src/detectors.js";
import { detectionsSchema, selfCheck } from "../src/types.js";

const IMAGE = join(__dirname, "..", "fixtures", "sample.png");

describe("stub backend", () => {
  it("emits a schema-valid payload", async () => {
    const detections = await new StubDetector().detect(IMAGE);
    expect(() => selfCheck(detections)).not.toThrow();
    expect(detectionsSchema.safeParse(detections).success).toBe(true);
  });

  it("is byte-identical across runs", async () => {
    const dir = mkdtempSync(join(tmpdir(), "detect-"));
    const a = join(dir, "a.json");
    const b = join(dir, "b.json");
    await runDetect({ image: IMAGE, out: a, stub: true, floor: 0.25 });
    await runDetect({ image: IMAGE, out: b, stub: true, floor: 0.25 });
    expect(readFileSync(a, "utf-8")).toBe(readFileSync(b, "utf-8"));
  });

  it("requires a readable image even in stub mode", async () => {
    await expect(new StubDetector().detect("/nonexistent.png")).rejects.toBeInstanceOf(ImageError);
  });

  it("keeps lane boundaries even when no lanes would be detected", async () => {
    // The canned scene has boundaries; an empty-boundaries payload is
    // still schema-valid, which the raw backend relies on.
    const parsed = detectionsSchema.safeParse({
      image_size: [100, 100],
      boxes: [],
      lane_boundaries: [],
    });
    expect(parsed.success).toBe(true);
  });

  it("matches the vendored schema's class vocabulary", async () => {
    const vendored = JSON.parse(
      readFileSync(join(__dirname, "..", "schema", "detections.schema.json"), "utf-8"),
    );
    const classes = vendored.properties.boxes.items.properties.class.enum as string[];
    const detections = await new StubDetector().detect(IMAGE);
    for (const box of detections.boxes) {
      expect(classes).toContain(box.class);
    }
  });
});
