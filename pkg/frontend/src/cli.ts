#!/usr/bin/env node
/**
 * detect: reference image in, shared detections JSON out.
 *
 *   scenario-forge-detect detect --image street.jpg --out detections.json --stub
 *   scenario-forge-detect detect --image street.jpg --raw-detections dump.json --out d.json
 *
 * The payload is self-checked against the vendored schema before writing;
 * a failed check aborts with no file written.
 */

import { writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { ImageError, ModelLoadError, makeDetector } from "./detectors.js";
import { SchemaSelfCheckError, selfCheck, type Detections } from "./types.js";

export function renderDetections(detections: Detections): string {
  return JSON.stringify(detections, null, 2) + "\n";
}

export async function runDetect(argv: {
  image: string;
  out: string;
  stub: boolean;
  objectModel?: string;
  laneModel?: string;
  rawDetections?: string;
  floor: number;
}): Promise<void> {
  const log = (line: string) => console.error(`[detect] ${line}`);
  const detector = makeDetector(
    {
      objectModel: argv.objectModel,
      laneModel: argv.laneModel,
      rawDetections: argv.rawDetections,
      confidenceFloor: argv.floor,
      stub: argv.stub,
    },
    log,
  );
  const detections = await detector.detect(argv.image);
  selfCheck(detections);
  writeFileSync(argv.out, renderDetections(detections), "utf-8");
  console.error(`[detect] wrote ${argv.out} (${detections.boxes.length} boxes, ${detections.lane_boundaries.length} boundaries)`);
}

export async function main(args: string[]): Promise<number> {
  try {
    await yargs(args)
      .command(
        "detect",
        "run detection on one image and write the shared detections JSON",
        (cmd) =>
          cmd
            .option("image", { type: "string", demandOption: true, describe: "reference image path" })
            .option("out", { type: "string", demandOption: true, describe: "output detections JSON path" })
            .option("stub", { type: "boolean", default: false, describe: "emit the canned CI scene" })
            .option("object-model", { type: "string", describe: "object-detector weights path" })
            .option("lane-model", { type: "string", describe: "lane-detector weights path" })
            .option("raw-detections", { type: "string", describe: "post-process an external run's dump" })
            .option("floor", { type: "number", default: 0.25, describe: "confidence floor" }),
        async (argv) =>
          runDetect({
            image: argv.image,
            out: argv.out,
            stub: argv.stub,
            objectModel: argv.objectModel,
            laneModel: argv.laneModel,
            rawDetections: argv.rawDetections,
            floor: argv.floor,
          }),
      )
      .demandCommand(1)
      .strict()
      .fail((msg, err) => {
        throw err ?? new Error(msg);
      })
      .parseAsync();
    return 0;
  } catch (err) {
    if (err instanceof ModelLoadError || err instanceof ImageError || err instanceof SchemaSelfCheckError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const invokedDirectly = process.argv[1]?.endsWith("cli.js");
if (invokedDirectly) {
  main(hideBin(process.argv)).then((code) => process.exit(code));
}
