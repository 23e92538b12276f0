// Session wiring: fetch a task, render it, submit, repeat. One in-flight
// task per session (the server answers 409 otherwise); on failures the
// draft stays on screen and the worker can retry without losing work.

import { ApiError, fetchNextTask, postSubmission } from './api.js';
import { TaskView } from './state.js';
import { renderErrorBanner, renderRetry, renderTask } from './view.js';

function workerId(): string {
  const fromQuery = new URLSearchParams(window.location.search).get('worker');
  if (fromQuery) {
    localStorage.setItem('worker_id', fromQuery);
    return fromQuery;
  }
  let stored = localStorage.getItem('worker_id');
  if (!stored) {
    stored = `w-${Math.random().toString(36).slice(2, 10)}`;
    localStorage.setItem('worker_id', stored);
  }
  return stored;
}

async function loadNext(container: HTMLElement, worker: string): Promise<void> {
  container.replaceChildren();
  let doc;
  try {
    doc = await fetchNextTask(worker);
  } catch (err) {
    const message =
      err instanceof ApiError && err.status === 404
        ? 'No tasks available right now.'
        : `Could not fetch a task (${err instanceof Error ? err.message : String(err)}).`;
    container.append(renderRetry(message, () => void loadNext(container, worker)));
    return;
  }

  const view = new TaskView(doc);
  view.focusGained(Date.now());
  const onFocus = () => view.focusGained(Date.now());
  const onBlur = () => view.focusLost(Date.now());
  window.addEventListener('focus', onFocus);
  window.addEventListener('blur', onBlur);

  const submit = async () => {
    try {
      await postSubmission({
        task_id: doc.task_id,
        worker_id: worker,
        payload: view.payload(),
        client_focus_seconds: view.focusSeconds(Date.now()),
      });
    } catch (err) {
      // keep the draft; surface the failure without destroying state
      container.prepend(
        renderErrorBanner(
          `Submission failed (${err instanceof Error ? err.message : String(err)}); your work is kept, try again.`
        )
      );
      return;
    }
    window.removeEventListener('focus', onFocus);
    window.removeEventListener('blur', onBlur);
    await loadNext(container, worker);
  };

  container.append(renderTask(doc, view, { onSubmit: () => void submit() }));
}

export function boot(): void {
  const container = document.getElementById('app');
  if (!container) {
    throw new Error('missing #app container');
  }
  void loadNext(container, workerId());
}

// module scripts run deferred, so the container exists on a real page;
// test imports skip the auto-boot and call boot() themselves
if (typeof document !== 'undefined' && document.getElementById('app')) {
  boot();
}
