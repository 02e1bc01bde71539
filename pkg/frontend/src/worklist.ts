// Worklist state: parse an uploaded signal list, fetch suggestions lazily,
// confirm labels through the service, export confirmed pairs as CSV.

import { ApiClient, ApiError, Suggestions } from './api.js';

export type ReviewStatus = 'pending' | 'confirmed';

export interface ReviewItem {
  id: number;
  customerSignal: string;
  suggestions: Suggestions | null; // null until fetched
  status: ReviewStatus;
  chosenLabel: string | null;
  error: string | null;
}

/** One pending item per nonempty line; duplicates are kept (projects repeat signals). */
export function parseWorklist(text: string): ReviewItem[] {
  return text
    .split(/\r?\n/)
    .map((line) => line.trim())
    .filter((line) => line.length > 0)
    .map((customerSignal, id) => ({
      id,
      customerSignal,
      suggestions: null,
      status: 'pending' as ReviewStatus,
      chosenLabel: null,
      error: null,
    }));
}

function csvField(value: string): string {
  return /[",\n\r]/.test(value) ? '"' + value.replace(/"/g, '""') + '"' : value;
}

/** CSV of the confirmed pairs, header `customer_signal,library_signal`. */
export function exportCsv(items: ReviewItem[]): string {
  const rows = ['customer_signal,library_signal'];
  for (const item of items) {
    if (item.status === 'confirmed' && item.chosenLabel !== null) {
      rows.push(`${csvField(item.customerSignal)},${csvField(item.chosenLabel)}`);
    }
  }
  return rows.join('\n') + '\n';
}

export class WorklistStore {
  items: ReviewItem[] = [];

  constructor(
    private api: ApiClient,
    public k: number = 10,
    public source: string = 'review-ui',
  ) {}

  load(text: string): void {
    this.items = parseWorklist(text);
  }

  /** Fetch suggestions for an item if not already present. */
  async ensureSuggestions(item: ReviewItem): Promise<void> {
    if (item.suggestions !== null) return;
    try {
      item.suggestions = await this.api.suggest(item.customerSignal, this.k);
      item.error = null;
    } catch (error) {
      item.error = error instanceof Error ? error.message : String(error);
    }
  }

  /**
   * Confirm a label for an item. On success the item is marked confirmed;
   * on any failure it stays pending and the error is surfaced on the item.
   */
  async confirm(item: ReviewItem, label: string): Promise<boolean> {
    try {
      await this.api.confirm(item.customerSignal, label, this.source);
      item.status = 'confirmed';
      item.chosenLabel = label.toLowerCase();
      item.error = null;
      return true;
    } catch (error) {
      item.error =
        error instanceof ApiError
          ? error.message
          : `confirmation failed: ${error instanceof Error ? error.message : String(error)}`;
      return false;
    }
  }

  /** Confirm suggestion number `rank` (1-based) for an item. */
  async confirmRank(item: ReviewItem, rank: number): Promise<boolean> {
    const entries = item.suggestions?.entries ?? [];
    if (rank < 1 || rank > entries.length) {
      item.error = `no suggestion at rank ${rank}`;
      return false;
    }
    return this.confirm(item, entries[rank - 1].label);
  }

  confirmedCount(): number {
    return this.items.filter((item) => item.status === 'confirmed').length;
  }

  allConfirmed(): boolean {
    return this.items.length > 0 && this.confirmedCount() === this.items.length;
  }

  exportCsv(): string {
    return exportCsv(this.items);
  }
}
