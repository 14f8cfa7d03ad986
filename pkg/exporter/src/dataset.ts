// Dataset readers: JSON-lines, TSV (no quoting) and RFC-4180 CSV.
// Documents come back in file order; a text field holding an array of
// strings (multi-post authors) is joined with single spaces.

import { readFileSync } from "node:fs";

export interface Docs {
  ids: string[];
  texts: string[];
}

export interface Schema {
  idField: string;
  textField: string;
}

export function loadDocuments(path: string, format: string, schema: Schema): Docs {
  const raw = readFileSync(path, "utf-8");
  switch (format) {
    case "jsonl":
      return parseJsonl(raw, schema, path);
    case "tsv":
      return parseDelimited(splitTsv(raw), schema, path);
    case "csv":
      return parseDelimited(parseCsv(raw), schema, path);
    default:
      throw new Error(`unknown dataset format '${format}'`);
  }
}

function parseJsonl(raw: string, schema: Schema, path: string): Docs {
  const ids: string[] = [];
  const texts: string[] = [];
  const lines = raw.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    let obj: Record<string, unknown>;
    try {
      obj = JSON.parse(line);
    } catch {
      throw new Error(`${path}:${i + 1}: invalid JSON`);
    }
    if (!(schema.idField in obj) || !(schema.textField in obj)) {
      throw new Error(`${path}:${i + 1}: missing '${schema.idField}' or '${schema.textField}'`);
    }
    const value = obj[schema.textField];
    const text = Array.isArray(value) ? value.map(String).join(" ") : String(value);
    ids.push(String(obj[schema.idField]));
    texts.push(text);
  }
  return { ids, texts };
}

function splitTsv(raw: string): string[][] {
  const rows: string[][] = [];
  for (const line of raw.split("\n")) {
    if (line === "" || line === "\r") continue;
    rows.push(line.replace(/\r$/u, "").split("\t"));
  }
  return rows;
}

function parseCsv(raw: string): string[][] {
  const rows: string[][] = [];
  let row: string[] = [];
  let field = "";
  let quoted = false;
  for (let i = 0; i < raw.length; i++) {
    const ch = raw[i];
    if (quoted) {
      if (ch === '"') {
        if (raw[i + 1] === '"') {
          field += '"';
          i++;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      row.push(field);
      field = "";
    } else if (ch === "\n") {
      row.push(field.replace(/\r$/u, ""));
      if (row.length > 1 || row[0] !== "") rows.push(row);
      row = [];
      field = "";
    } else {
      field += ch;
    }
  }
  if (field !== "" || row.length > 0) {
    row.push(field);
    rows.push(row);
  }
  return rows;
}

function parseDelimited(rows: string[][], schema: Schema, path: string): Docs {
  if (rows.length === 0) throw new Error(`${path}: file has no header row`);
  const header = rows[0];
  const idCol = header.indexOf(schema.idField);
  const textCol = header.indexOf(schema.textField);
  if (idCol < 0 || textCol < 0) {
    throw new Error(
      `${path}: header ${JSON.stringify(header)} lacks '${schema.idField}' or '${schema.textField}'`,
    );
  }
  const ids: string[] = [];
  const texts: string[] = [];
  for (let i = 1; i < rows.length; i++) {
    if (rows[i].length !== header.length) {
      throw new Error(`${path}:${i + 1}: expected ${header.length} fields, got ${rows[i].length}`);
    }
    ids.push(rows[i][idCol]);
    texts.push(rows[i][textCol]);
  }
  return { ids, texts };
}
