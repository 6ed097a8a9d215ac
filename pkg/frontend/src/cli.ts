/** `stepfreeze-figures render --kind <k> --in <files...> --out <svg>` */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { FIGURE_KINDS, FigureKind, renderFigure } from "./render.js";
import { MissingField, SchemaMismatch } from "./schema.js";

export async function run(argv: string[]): Promise<number> {
  let exitCode = 0;
  await yargs(argv)
    .command(
      "render",
      "render one figure from analysis reports",
      (cmd) =>
        cmd
          .option("kind", {
            choices: FIGURE_KINDS,
            demandOption: true,
            describe: "figure kind",
          })
          .option("in", {
            type: "string",
            array: true,
            demandOption: true,
            describe: "input report files",
          })
          .option("out", {
            type: "string",
            demandOption: true,
            describe: "output SVG path",
          }),
      (args) => {
        try {
          const svg = renderFigure(args.kind as FigureKind, args.in);
          mkdirSync(dirname(args.out), { recursive: true });
          writeFileSync(args.out, svg);
          console.log(`wrote ${args.out}`);
        } catch (err) {
          if (err instanceof SchemaMismatch || err instanceof MissingField) {
            console.error(`error: ${err.message}`);
            exitCode = 2;
          } else {
            throw err;
          }
        }
      },
    )
    .demandCommand(1)
    .strict()
    .parseAsync();
  return exitCode;
}

run(hideBin(process.argv)).then((code) => {
  process.exitCode = code;
});
