// Wire types of the campaign API (all documents carry a version field "v").

export type TaskStructure = 'proofing' | 'find' | 'fix';

export interface SegmentView {
  segment_id: string;
  noisy_text: string;
  image_url?: string;
}

export interface Progress {
  done: number;
  total: number;
}

export interface TaskDocument {
  v: number;
  task_id: string;
  structure: TaskStructure;
  show_image: boolean;
  spellcheck_disabled: boolean;
  segments: SegmentView[];
  progress: Progress;
  // fix tasks only: segment_id -> indices of editable tokens
  editable_spans?: Record<string, number[]>;
}

export interface FindMark {
  index: number;
  token: string;
}

export type ProofPayload = { type: 'proof'; texts: Record<string, string> };
export type FindPayload = { type: 'find'; selections: Record<string, FindMark[]> };
export type FixPayload = {
  type: 'fix';
  edits: Record<string, { index: number; replacement: string }[]>;
};
export type SubmissionPayload = ProofPayload | FindPayload | FixPayload;

export interface SubmissionBody {
  task_id: string;
  worker_id: string;
  payload: SubmissionPayload;
  // auxiliary metadata; the server keeps its own authoritative clock
  client_focus_seconds?: number;
}

export interface SubmissionReceipt {
  v: number;
  submission_id: string;
  progress: Progress;
}
