// DOM rendering for the three task screens. No framework: the screens are
// a header, an optional image pane, per-segment text, and a submit button.
// Native spell checking and autocorrection are switched off on every
// editable element so workers only fix what they can actually see.

import { TaskView, bannerText } from './state.js';
import { tokenize } from './tokenize.js';
import type { TaskDocument } from './types.js';

const INSTRUCTIONS: Record<TaskDocument['structure'], [string, string]> = {
  find: [
    'Mark (click on) all the words where there is a mismatch between the word and the image.',
    'Mark (click on) all the words with OCR errors.',
  ],
  fix: [
    'Fix (edit) all the words with the text boxes to be the same as the image.',
    'Fix (edit) all the words with the text boxes.',
  ],
  proofing: [
    'Find and fix all the words that do not match the image.',
    'Find and fix all the words with OCR errors.',
  ],
};

function disableAssist(el: HTMLElement): void {
  el.setAttribute('spellcheck', 'false');
  el.setAttribute('autocorrect', 'off');
  el.setAttribute('autocomplete', 'off');
  el.setAttribute('autocapitalize', 'off');
}

export interface RenderCallbacks {
  onSubmit: () => void;
}

export function renderTask(doc: TaskDocument, view: TaskView, callbacks: RenderCallbacks): HTMLElement {
  const root = document.createElement('div');
  root.className = 'task';

  const header = document.createElement('header');
  const title = document.createElement('h1');
  title.textContent = 'Lets fix some errors';
  const instruction = document.createElement('p');
  instruction.className = 'instruction';
  instruction.textContent = INSTRUCTIONS[doc.structure][doc.show_image ? 0 : 1];
  const progress = document.createElement('span');
  progress.className = 'progress';
  progress.textContent = bannerText(doc.progress.done, doc.progress.total);
  header.append(title, instruction, progress);
  root.append(header);

  const panes = document.createElement('div');
  panes.className = 'panes';
  if (doc.show_image) {
    const imagePane = document.createElement('div');
    imagePane.className = 'image-pane';
    for (const segment of doc.segments) {
      if (segment.image_url) {
        const img = document.createElement('img');
        img.src = segment.image_url;
        img.alt = `scan of ${segment.segment_id}`;
        imagePane.append(img);
      }
    }
    panes.append(imagePane);
  }

  const textPane = document.createElement('div');
  textPane.className = 'text-pane';
  for (const segment of doc.segments) {
    textPane.append(renderSegment(doc, segment.segment_id, segment.noisy_text, view));
  }
  panes.append(textPane);
  root.append(panes);

  const submit = document.createElement('button');
  submit.className = 'submit';
  submit.textContent = 'Submit';
  submit.addEventListener('click', callbacks.onSubmit);
  root.append(submit);
  return root;
}

function renderSegment(doc: TaskDocument, segmentId: string, noisyText: string, view: TaskView): HTMLElement {
  const section = document.createElement('section');
  section.className = 'segment';
  section.dataset.segmentId = segmentId;

  if (doc.structure === 'proofing') {
    const area = document.createElement('textarea');
    area.value = noisyText;
    disableAssist(area);
    area.addEventListener('input', () => view.setProofText(segmentId, area.value));
    section.append(area);
    return section;
  }

  const tokens = tokenize(noisyText);
  if (doc.structure === 'find') {
    let cursor = 0;
    for (const token of tokens) {
      section.append(document.createTextNode(noisyText.slice(cursor, token.start)));
      const span = document.createElement('span');
      span.className = 'token';
      span.dataset.index = String(token.index);
      span.textContent = token.text;
      span.addEventListener('click', () => {
        const marked = view.toggleMark(segmentId, token.index);
        span.classList.toggle('marked', marked);
      });
      section.append(span);
      cursor = token.end;
    }
    section.append(document.createTextNode(noisyText.slice(cursor)));
    return section;
  }

  // fix: plain text everywhere, input boxes only at the marked spans
  const editable = new Set(doc.editable_spans?.[segmentId] ?? []);
  let cursor = 0;
  for (const token of tokens) {
    section.append(document.createTextNode(noisyText.slice(cursor, token.start)));
    if (editable.has(token.index)) {
      const box = document.createElement('input');
      box.type = 'text';
      box.className = 'fix-box';
      box.dataset.index = String(token.index);
      box.value = token.text;
      box.size = Math.max(token.text.length, 3);
      disableAssist(box);
      box.addEventListener('input', () => view.setEdit(segmentId, token.index, box.value));
      section.append(box);
    } else {
      const span = document.createElement('span');
      span.className = 'token readonly';
      span.textContent = token.text;
      section.append(span);
    }
    cursor = token.end;
  }
  section.append(document.createTextNode(noisyText.slice(cursor)));
  return section;
}

export function renderRetry(message: string, onRetry: () => void): HTMLElement {
  const root = document.createElement('div');
  root.className = 'retry';
  const note = document.createElement('p');
  note.textContent = message;
  const button = document.createElement('button');
  button.textContent = 'Try again';
  button.addEventListener('click', onRetry);
  root.append(note, button);
  return root;
}

export function renderErrorBanner(message: string): HTMLElement {
  const banner = document.createElement('div');
  banner.className = 'error-banner';
  banner.textContent = message;
  return banner;
}
