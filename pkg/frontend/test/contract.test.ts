/**
 * Cross-component contract: the adapter's output must satisfy the primary
 * pipeline's own validator and feed its full compose path. These tests
 * shell out to the installed `scenario-forge` CLI; they fail loudly if it
 * is missing, because the contract is the whole point of this package.
 */

import { execFileSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";

import { describe, expect, it } from "vitest";

import { runDetect } from "../src/cli.js";

const IMAGE = join(__dirname, "..", "fixtures", "sample.png");
const REPO = resolve(__dirname, "..", "..");

function forge(args: string[], cwd: string): string {
  return execFileSync("scenario-forge", args, { cwd, encoding: "utf-8" });
}

describe("primary-component contract", () => {
  it("stub output passes the primary schema validator (extract-vision)", async () => {
    const dir = mkdtempSync(join(tmpdir(), "contract-"));
    const detections = join(dir, "detections.json");
    await runDetect({ image: IMAGE, out: detections, stub: true, floor: 0.25 });
    forge(["-o", join(dir, "visual.scn.yaml"), "extract-vision", detections], dir);
    const visual = readFileSync(join(dir, "visual.scn.yaml"), "utf-8");
    expect(visual).toContain("lane_number: 3");
    expect(visual).toContain("traffic_light: red_light");
  });

  it("stub output feeds compose end-to-end", async () => {
    const dir = mkdtempSync(join(tmpdir(), "contract-"));
    const detections = join(dir, "detections.json");
    await runDetect({ image: IMAGE, out: detections, stub: true, floor: 0.25 });
    const description = join(REPO, "tests", "fixtures", "benchmark", "rec_001", "description.txt");
    const mockDir = join(REPO, "tests", "fixtures", "mock_llm");
    forge(
      ["--mock-dir", mockDir, "-o", join(dir, "out.scn.yaml"), "compose", description, detections, "--report"],
      dir,
    );
    expect(existsSync(join(dir, "out.scn.yaml"))).toBe(true);
    expect(existsSync(join(dir, "out.merge-report.json"))).toBe(true);
    const merged = readFileSync(join(dir, "out.scn.yaml"), "utf-8");
    expect(merged).toContain("weather: rainy"); // textual side survives alignment
    expect(merged).toContain("provenance: both"); // at least one actor matched
  });

  it("vendored schema is byte-identical to the primary's published copy", () => {
    const vendored = readFileSync(join(__dirname, "..", "schema", "detections.schema.json"), "utf-8");
    const published = readFileSync(join(REPO, "docs", "detections.schema.json"), "utf-8");
    expect(vendored).toBe(published);
  });

  it("raw-dump post-processing emits only shared classes end to end", async () => {
    const dir = mkdtempSync(join(tmpdir(), "contract-"));
    const dump = join(dir, "dump.json");
    writeFileSync(
      dump,
      JSON.stringify({
        image_size: [640, 480],
        detections: [
          { label: "car", bbox: [100, 200, 180, 260], confidence: 0.9 },
          { label: "parking meter", bbox: [10, 20, 30, 60], confidence: 0.8 },
          { label: "person", bbox: [300, 220, 330, 300], confidence: 0.2 },
        ],
        lane_lines: [
          [
            [100, 0],
            [100, 480],
          ],
          [
            [300, 0],
            [300, 480],
          ],
        ],
      }),
    );
    const out = join(dir, "detections.json");
    await runDetect({ image: IMAGE, out, stub: false, rawDetections: dump, floor: 0.25 });
    const payload = JSON.parse(readFileSync(out, "utf-8"));
    // parking meter dropped by mapping, low-confidence person by the floor
    expect(payload.boxes).toHaveLength(1);
    expect(payload.boxes[0].class).toBe("car");
    forge(["-o", join(dir, "v.scn.yaml"), "extract-vision", out], dir);
  });
});
