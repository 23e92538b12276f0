import type { SubmissionBody, SubmissionReceipt, TaskDocument } from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string
  ) {
    super(`${status}: ${detail}`);
  }
}

async function detailOf(resp: Response): Promise<string> {
  try {
    const body = await resp.json();
    return body.detail ?? resp.statusText;
  } catch {
    return resp.statusText;
  }
}

export async function fetchNextTask(workerId: string): Promise<TaskDocument> {
  const resp = await fetch(`/api/tasks/next?worker=${encodeURIComponent(workerId)}`);
  if (!resp.ok) {
    throw new ApiError(resp.status, await detailOf(resp));
  }
  return (await resp.json()) as TaskDocument;
}

export async function postSubmission(body: SubmissionBody): Promise<SubmissionReceipt> {
  const resp = await fetch('/api/submissions', {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body),
  });
  if (!resp.ok) {
    throw new ApiError(resp.status, await detailOf(resp));
  }
  return (await resp.json()) as SubmissionReceipt;
}
