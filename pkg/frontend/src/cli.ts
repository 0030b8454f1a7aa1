#!/usr/bin/env node
/** figures <kind> --in file.csv --out fig.svg */

import { readFileSync, writeFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import { CsvError, MissingColumnError } from "./csv.js";
import { Kind, KINDS, render } from "./figures.js";

function usage(): string {
  return `usage: bosedeph-figures <kind> --in <file.csv> --out <fig.svg>\nkinds: ${KINDS.join(", ")}`;
}

export function main(argv: string[]): number {
  const args = [...argv];
  const kind = args.shift();
  let input: string | undefined;
  let output: string | undefined;
  while (args.length > 0) {
    const flag = args.shift();
    if (flag === "--in") {
      input = args.shift();
    } else if (flag === "--out") {
      output = args.shift();
    } else {
      console.error(`unknown argument ${JSON.stringify(flag)}\n${usage()}`);
      return 2;
    }
  }
  if (!kind || !input || !output) {
    console.error(usage());
    return 2;
  }
  if (!(KINDS as readonly string[]).includes(kind)) {
    console.error(`unknown figure kind ${JSON.stringify(kind)}\n${usage()}`);
    return 2;
  }

  let text: string;
  try {
    text = readFileSync(input, "utf8");
  } catch (err) {
    console.error(`cannot read ${input}: ${(err as Error).message}`);
    return 2;
  }
  try {
    writeFileSync(output, render(kind as Kind, text));
  } catch (err) {
    if (err instanceof MissingColumnError || err instanceof CsvError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  console.log(`wrote ${output}`);
  return 0;
}

if (process.argv[1] && fileURLToPath(import.meta.url) === process.argv[1]) {
  process.exit(main(process.argv.slice(2)));
}
