// Browser app: keyboard-first review of a worklist of customer signal names.
//
// Keys: j/down next item, k/up previous, 1-9 confirm that suggestion,
// m focus manual entry, e export CSV, r rebuild the model.

import { ApiClient } from './api.js';
import { ReviewItem, WorklistStore } from './worklist.js';

const api = new ApiClient('');
const store = new WorklistStore(api);
let cursor = 0;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function download(filename: string, text: string): void {
  const blob = new Blob([text], { type: 'text/csv' });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement('a');
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}

function scorePercent(score: number): string {
  return (score * 100).toFixed(1) + '%';
}

function renderSuggestions(item: ReviewItem): string {
  if (item.suggestions === null) return '<p class="muted">loading suggestions…</p>';
  const { entries, fallback } = item.suggestions;
  if (entries.length === 0) return '<p class="muted">no suggestions</p>';
  const badge = fallback
    ? '<span class="fallback-badge" title="no query token was seen in training; ranked by global frequency">fallback</span>'
    : '';
  const rows = entries
    .map(
      (entry, index) => `
      <li>
        <button class="pick" data-rank="${index + 1}">
          <span class="rank">${index + 1}</span>
          <span class="label">${escapeHtml(entry.label)}</span>
          <span class="score">${fallback ? '—' : scorePercent(entry.score)}</span>
        </button>
      </li>`,
    )
    .join('');
  return `${badge}<ol class="suggestions">${rows}</ol>`;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function render(): void {
  const list = el<HTMLUListElement>('items');
  const empty = el<HTMLParagraphElement>('empty-state');
  const detail = el<HTMLDivElement>('detail');
  empty.style.display = store.items.length === 0 ? 'block' : 'none';
  list.innerHTML = store.items
    .map((item, index) => {
      const classes = [
        'item',
        index === cursor ? 'current' : '',
        item.status === 'confirmed' ? 'confirmed' : '',
      ]
        .filter(Boolean)
        .join(' ');
      const mark =
        item.status === 'confirmed'
          ? `✓ ${escapeHtml(item.chosenLabel ?? '')}`
          : 'pending';
      return `<li class="${classes}" data-index="${index}">
        <span class="signal">${escapeHtml(item.customerSignal)}</span>
        <span class="status">${mark}</span>
      </li>`;
    })
    .join('');

  const item = store.items[cursor];
  if (!item) {
    detail.innerHTML = '';
  } else {
    detail.innerHTML = `
      <h2>${escapeHtml(item.customerSignal)}</h2>
      ${item.error ? `<p class="error">${escapeHtml(item.error)}</p>` : ''}
      ${renderSuggestions(item)}
      <div class="manual">
        <input id="manual-label" placeholder="manual library name… (enter to confirm)" />
      </div>`;
    detail.querySelectorAll<HTMLButtonElement>('button.pick').forEach((button) => {
      button.addEventListener('click', () =>
        void confirmRank(Number(button.dataset.rank)),
      );
    });
    const manual = el<HTMLInputElement>('manual-label');
    manual.addEventListener('keydown', (event) => {
      if (event.key === 'Enter' && manual.value.trim()) {
        void confirmManual(manual.value.trim());
      }
      event.stopPropagation();
    });
  }
  el<HTMLSpanElement>('progress').textContent =
    `${store.confirmedCount()} / ${store.items.length} confirmed`;
}

async function focusItem(index: number): Promise<void> {
  if (store.items.length === 0) return;
  cursor = Math.max(0, Math.min(index, store.items.length - 1));
  const item = store.items[cursor];
  render();
  await store.ensureSuggestions(item);
  render();
}

async function confirmRank(rank: number): Promise<void> {
  const item = store.items[cursor];
  if (!item) return;
  if (await store.confirmRank(item, rank)) {
    await focusItem(cursor + 1);
  } else {
    render();
  }
}

async function confirmManual(label: string): Promise<void> {
  const item = store.items[cursor];
  if (!item) return;
  if (await store.confirm(item, label)) {
    await focusItem(cursor + 1);
  } else {
    render();
  }
}

async function rebuild(): Promise<void> {
  const status = el<HTMLSpanElement>('model-status');
  status.textContent = 'rebuilding…';
  try {
    const version = await api.rebuild();
    // suggestions come from the old model; refetch lazily
    store.items.forEach((item) => {
      if (item.status === 'pending') item.suggestions = null;
    });
    status.textContent = `model ${version}`;
  } catch (error) {
    status.textContent = error instanceof Error ? error.message : String(error);
  }
  await focusItem(cursor);
}

function exportConfirmed(): void {
  download('confirmed_pairs.csv', store.exportCsv());
}

function onKey(event: KeyboardEvent): void {
  if ((event.target as HTMLElement | null)?.tagName === 'INPUT') return;
  if (event.key === 'j' || event.key === 'ArrowDown') void focusItem(cursor + 1);
  else if (event.key === 'k' || event.key === 'ArrowUp') void focusItem(cursor - 1);
  else if (event.key >= '1' && event.key <= '9') void confirmRank(Number(event.key));
  else if (event.key === 'm') {
    document.getElementById('manual-label')?.focus();
    event.preventDefault();
  } else if (event.key === 'e') exportConfirmed();
  else if (event.key === 'r') void rebuild();
}

function init(): void {
  el<HTMLInputElement>('file-input').addEventListener('change', async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    store.load(await file.text());
    cursor = 0;
    await focusItem(0);
  });
  el<HTMLButtonElement>('export-button').addEventListener('click', exportConfirmed);
  el<HTMLButtonElement>('rebuild-button').addEventListener('click', () => void rebuild());
  document.addEventListener('keydown', onKey);
  void api
    .modelInfo()
    .then((info) => {
      el<HTMLSpanElement>('model-status').textContent =
        `${info.method} ${info.model_version} (${info.n_training_pairs} pairs)`;
    })
    .catch(() => {
      el<HTMLSpanElement>('model-status').textContent = 'service unreachable';
    });
  render();
}

init();
