// Embedding backends.
//
// "transformers": mean-pooled feature extraction through a pretrained
// sentence-transformer (requires the optional @xenova/transformers package
// and a reachable model hub or local cache).
//
// "hash": a deterministic offline encoder that scatters seeded per-token
// contributions into the target dimension and L2-normalizes.  It carries no
// semantics; it exists so the DRM contract, CLI and byte-stability can be
// exercised without downloading model weights.

export const KNOWN_DIMS: Record<string, number> = {
  "distilbert-base-nli-mean-tokens": 768,
  "roberta-large-nli-stsb-mean-tokens": 768,
  "xlm-r-large-en-ko-nli-ststb": 768,
};

export type Encoder = (batch: string[][]) => Promise<Float32Array[]>;

function fnv1a(text: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function hashEncoder(dim: number): Encoder {
  const scatterPerToken = 16;
  return async (batch: string[][]) =>
    batch.map((tokens) => {
      const acc = new Float64Array(dim);
      for (const token of tokens) {
        const rand = mulberry32(fnv1a(token));
        for (let k = 0; k < scatterPerToken; k++) {
          const idx = Math.floor(rand() * dim);
          acc[idx] += rand() * 2 - 1;
        }
      }
      let norm = 0;
      for (let j = 0; j < dim; j++) norm += acc[j] * acc[j];
      norm = Math.sqrt(norm);
      const out = new Float32Array(dim);
      if (norm > 0) {
        for (let j = 0; j < dim; j++) out[j] = acc[j] / norm;
      }
      return out;
    });
}

function resolveModelId(model: string): string {
  return model.includes("/") ? model : `sentence-transformers/${model}`;
}

export async function transformersEncoder(model: string): Promise<Encoder> {
  let transformers: any;
  try {
    // optional dependency; the variable specifier keeps it runtime-only
    const moduleName = "@xenova/transformers";
    transformers = await import(moduleName);
  } catch {
    throw new Error(
      "the transformers backend needs the optional '@xenova/transformers' " +
      "package (npm install @xenova/transformers), or use --backend hash",
    );
  }
  let extractor: any;
  try {
    extractor = await transformers.pipeline("feature-extraction", resolveModelId(model));
  } catch (err) {
    throw new Error(`failed to load model '${model}': ${(err as Error).message}`);
  }
  return async (batch: string[][]) => {
    // the encoder consumes preprocessed tokens; models want running text
    const texts = batch.map((tokens) => tokens.join(" "));
    const output = await extractor(texts, { pooling: "mean", normalize: false });
    const [n, dim] = output.dims.slice(-2);
    const flat: Float32Array = Float32Array.from(output.data);
    const out: Float32Array[] = [];
    for (let i = 0; i < n; i++) {
      out.push(flat.slice(i * dim, (i + 1) * dim));
    }
    return out;
  };
}
