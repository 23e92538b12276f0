// Mirror of the server's fix-payload reconstruction, used to show the
// worker a live preview and to verify round-trip fidelity in tests. An
// empty replacement removes the token together with one adjacent
// whitespace run (so clearing the tail fragment of a broken word leaves no
// hole); a non-empty replacement substitutes the token span verbatim.

import { tokenize } from './tokenize.js';

export interface FixEdit {
  index: number;
  replacement: string;
}

export function applyFixEdits(noisyText: string, edits: FixEdit[]): string {
  const spans = tokenize(noisyText);
  const ordered = [...edits].sort((a, b) => b.index - a.index);
  let text = noisyText;
  for (const edit of ordered) {
    if (edit.index < 0 || edit.index >= spans.length) {
      throw new Error(`edit index ${edit.index} out of range`);
    }
    let { start, end } = spans[edit.index];
    if (edit.replacement === '') {
      if (edit.index > 0) {
        start = spans[edit.index - 1].end;
      } else if (edit.index + 1 < spans.length) {
        end = spans[edit.index + 1].start;
      }
      text = text.slice(0, start) + text.slice(end);
    } else {
      text = text.slice(0, start) + edit.replacement + text.slice(end);
    }
  }
  return text;
}
