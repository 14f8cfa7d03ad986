#!/usr/bin/env node
// export subcommand: read a dataset file, embed every document and write a
// DRM matrix plus its id sidecar.  Row order always matches input order and
// repeated runs are byte-identical for a fixed model snapshot.

import { parseArgs } from "node:util";
import { loadDocuments } from "./dataset.js";
import { writeDrm } from "./drm.js";
import { Encoder, KNOWN_DIMS, hashEncoder, transformersEncoder } from "./encoder.js";
import { preprocess } from "./preprocess.js";

const USAGE = `usage: export --input PATH --model NAME --out PATH.drm
              [--format jsonl|tsv|csv] [--id-field id] [--text-field text]
              [--backend transformers|hash] [--batch 32] [--dim D]`;

async function runExport(argv: string[]): Promise<number> {
  const { values } = parseArgs({
    args: argv,
    options: {
      input: { type: "string" },
      format: { type: "string", default: "jsonl" },
      "id-field": { type: "string", default: "id" },
      "text-field": { type: "string", default: "text" },
      model: { type: "string" },
      backend: { type: "string", default: "transformers" },
      out: { type: "string" },
      batch: { type: "string", default: "32" },
      dim: { type: "string" },
    },
  });
  if (!values.input || !values.model || !values.out) {
    console.error(USAGE);
    return 1;
  }
  const batchSize = parseInt(values.batch as string, 10);
  const dim = values.dim
    ? parseInt(values.dim as string, 10)
    : KNOWN_DIMS[values.model as string] ?? 768;

  const docs = loadDocuments(values.input as string, values.format as string, {
    idField: values["id-field"] as string,
    textField: values["text-field"] as string,
  });
  if (docs.ids.length === 0) {
    console.error(`error: ${values.input} holds no documents; refusing to write an empty DRM`);
    return 1;
  }

  let encode: Encoder;
  if (values.backend === "hash") {
    encode = hashEncoder(dim);
  } else if (values.backend === "transformers") {
    encode = await transformersEncoder(values.model as string);
  } else {
    console.error(`error: unknown backend '${values.backend}'`);
    return 1;
  }

  const tokenized = docs.texts.map(preprocess);
  const vectors: Float32Array[] = [];
  for (let start = 0; start < tokenized.length; start += batchSize) {
    const batch = tokenized.slice(start, start + batchSize);
    for (const vec of await encode(batch)) {
      if (vec.length !== dim) {
        console.error(`error: model produced ${vec.length}-dim vectors, expected ${dim}`);
        return 1;
      }
      vectors.push(vec);
    }
  }

  const flat = new Float32Array(vectors.length * dim);
  vectors.forEach((vec, i) => flat.set(vec, i * dim));
  writeDrm(values.out as string, vectors.length, dim, flat, docs.ids);
  console.log(`wrote ${values.out} (${vectors.length}x${dim}) and ${values.out}.ids`);
  return 0;
}

async function main(): Promise<number> {
  const [command, ...rest] = process.argv.slice(2);
  if (command !== "export") {
    console.error(USAGE);
    return command === "--help" || command === "-h" ? 0 : 1;
  }
  try {
    return await runExport(rest);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

main().then((code) => {
  process.exitCode = code;
});
