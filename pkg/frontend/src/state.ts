// Local task state: marks for find tasks, draft edits for fix tasks, the
// editable text for proofing tasks, plus a focus-time accumulator sent as
// auxiliary metadata (the server's clock stays authoritative).

import { tokenize } from './tokenize.js';
import type { FindMark, SubmissionPayload, TaskDocument } from './types.js';

export class TaskView {
  readonly doc: TaskDocument;
  private marks = new Map<string, Set<number>>();
  private edits = new Map<string, Map<number, string>>();
  private proofTexts = new Map<string, string>();
  private focusMillis = 0;
  private focusedAt: number | null = null;

  constructor(doc: TaskDocument) {
    this.doc = doc;
    for (const segment of doc.segments) {
      this.marks.set(segment.segment_id, new Set());
      this.edits.set(segment.segment_id, new Map());
      this.proofTexts.set(segment.segment_id, segment.noisy_text);
    }
  }

  isMarked(segmentId: string, index: number): boolean {
    return this.marks.get(segmentId)?.has(index) ?? false;
  }

  toggleMark(segmentId: string, index: number): boolean {
    const set = this.marks.get(segmentId);
    if (!set) {
      return false;
    }
    if (set.has(index)) {
      set.delete(index);
      return false;
    }
    set.add(index);
    return true;
  }

  setEdit(segmentId: string, index: number, value: string): void {
    const editable = this.doc.editable_spans?.[segmentId] ?? [];
    if (!editable.includes(index)) {
      throw new Error(`token ${index} of ${segmentId} is not editable`);
    }
    this.edits.get(segmentId)?.set(index, value);
  }

  setProofText(segmentId: string, value: string): void {
    this.proofTexts.set(segmentId, value);
  }

  proofText(segmentId: string): string {
    return this.proofTexts.get(segmentId) ?? '';
  }

  focusGained(now: number): void {
    if (this.focusedAt === null) {
      this.focusedAt = now;
    }
  }

  focusLost(now: number): void {
    if (this.focusedAt !== null) {
      this.focusMillis += now - this.focusedAt;
      this.focusedAt = null;
    }
  }

  focusSeconds(now: number): number {
    const open = this.focusedAt !== null ? now - this.focusedAt : 0;
    return (this.focusMillis + open) / 1000;
  }

  payload(): SubmissionPayload {
    if (this.doc.structure === 'proofing') {
      const texts: Record<string, string> = {};
      for (const segment of this.doc.segments) {
        texts[segment.segment_id] = this.proofText(segment.segment_id);
      }
      return { type: 'proof', texts };
    }
    if (this.doc.structure === 'find') {
      const selections: Record<string, FindMark[]> = {};
      for (const segment of this.doc.segments) {
        const tokens = tokenize(segment.noisy_text);
        const marked = [...(this.marks.get(segment.segment_id) ?? [])].sort((a, b) => a - b);
        selections[segment.segment_id] = marked.map((index) => ({
          index,
          token: tokens[index].text,
        }));
      }
      return { type: 'find', selections };
    }
    // fix: only boxes the worker actually changed count as edits
    const edits: Record<string, { index: number; replacement: string }[]> = {};
    for (const segment of this.doc.segments) {
      const tokens = tokenize(segment.noisy_text);
      const drafts = this.edits.get(segment.segment_id) ?? new Map<number, string>();
      const changed = [...drafts.entries()]
        .filter(([index, value]) => value !== tokens[index].text)
        .sort(([a], [b]) => a - b)
        .map(([index, replacement]) => ({ index, replacement }));
      edits[segment.segment_id] = changed;
    }
    return { type: 'fix', edits };
  }
}

export function bannerText(done: number, total: number): string {
  return `You have done ${done} tasks out of ${total}`;
}
