// DRM writer: magic "DRM1", little-endian u64 rows, u64 cols, float32
// little-endian row-major payload; sidecar <file>.ids with one document id
// per line.  This is the exchange format the primary pipeline loads and
// its `inspect` command validates.

import { writeFileSync } from "node:fs";

export function encodeDrm(rows: number, cols: number, data: Float32Array): Buffer {
  if (data.length !== rows * cols) {
    throw new Error(`payload has ${data.length} values, expected ${rows * cols}`);
  }
  if (rows < 1 || cols < 1) {
    throw new Error(`refusing to encode a degenerate ${rows}x${cols} matrix`);
  }
  const buf = Buffer.alloc(4 + 16 + 4 * data.length);
  buf.write("DRM1", 0, "ascii");
  buf.writeBigUInt64LE(BigInt(rows), 4);
  buf.writeBigUInt64LE(BigInt(cols), 12);
  for (let i = 0; i < data.length; i++) {
    buf.writeFloatLE(data[i], 20 + 4 * i);
  }
  return buf;
}

export function writeDrm(path: string, rows: number, cols: number,
                         data: Float32Array, ids: string[]): void {
  if (ids.length !== rows) {
    throw new Error(`${ids.length} ids for ${rows} rows`);
  }
  writeFileSync(path, encodeDrm(rows, cols, data));
  writeFileSync(path + ".ids", ids.map((id) => id + "\n").join(""), "utf-8");
}
