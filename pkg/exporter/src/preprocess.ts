// Text cleaning identical to the primary pipeline: lowercase, whitespace
// tokenize, drop hashtag tokens, delete punctuation (Unicode category P)
// in place, drop stopwords and empty leftovers.  Implemented independently;
// the shared fixture tests/data/preprocess_pairs.json pins both sides.

import { STOPWORDS } from "./stopwords.js";

const PUNCT = /\p{P}/gu;

export function preprocess(text: string): string[] {
  const out: string[] = [];
  for (const raw of text.toLowerCase().split(/\s+/u)) {
    if (!raw || raw.startsWith("#")) continue;
    const tok = raw.replace(PUNCT, "");
    if (tok && !STOPWORDS.has(tok)) out.push(tok);
  }
  return out;
}
