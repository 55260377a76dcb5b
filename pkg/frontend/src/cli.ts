#!/usr/bin/env node
/**
 * figures make --kind <k> --in <files...> --out <path>
 *
 * Exit codes match the simulation CLI: 0 success, 1 bad input data or I/O,
 * 2 usage or validation errors.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { FIGURE_KINDS, UsageError, makeFigure, type InputFile } from "./figures.js";
import { SchemaError } from "./table.js";

const USAGE = `usage: figures make --kind <${FIGURE_KINDS.join("|")}> --in <files...> --out <path>`;

interface Args {
  kind: string;
  inputs: string[];
  out: string;
}

export function parseArgs(argv: string[]): Args {
  if (argv[0] !== "make") {
    throw new UsageError(
      argv.length === 0 ? USAGE : `unknown command '${argv[0]}'\n${USAGE}`,
    );
  }
  let kind: string | null = null;
  let out: string | null = null;
  const inputs: string[] = [];
  let i = 1;
  while (i < argv.length) {
    const flag = argv[i];
    if (flag === "--kind") {
      kind = argv[i + 1] ?? null;
      i += 2;
    } else if (flag === "--out") {
      out = argv[i + 1] ?? null;
      i += 2;
    } else if (flag === "--in") {
      i += 1;
      while (i < argv.length && !(argv[i] as string).startsWith("--")) {
        inputs.push(argv[i] as string);
        i += 1;
      }
    } else {
      throw new UsageError(`unexpected argument '${flag}'\n${USAGE}`);
    }
  }
  if (kind === null || out === null || inputs.length === 0) {
    throw new UsageError(`--kind, --in, and --out are all required\n${USAGE}`);
  }
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new UsageError(
      `unknown figure kind '${kind}' (expected one of: ${FIGURE_KINDS.join(", ")})`,
    );
  }
  return { kind, inputs, out };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`figures: error: ${(err as Error).message}`);
    return 2;
  }

  try {
    const loaded: InputFile[] = args.inputs.map((path) => ({
      path,
      text: readFileSync(path, "utf8"),
    }));
    const svg = makeFigure(args.kind, loaded);
    writeFileSync(args.out, svg);
    console.log(`figures: ${args.kind} (${loaded.length} inputs) -> ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`figures: error: ${err.message}`);
      return 2;
    }
    if (err instanceof SchemaError || (err as NodeJS.ErrnoException).code) {
      console.error(`figures: error: ${(err as Error).message}`);
      return 1;
    }
    throw err;
  }
}

const invoked = process.argv[1];
if (invoked !== undefined && import.meta.url === pathToFileURL(invoked).href) {
  process.exit(main(process.argv.slice(2)));
}
