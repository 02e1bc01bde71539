// Typed client for the suggestion service HTTP API.

export interface SuggestionEntry {
  label: string;
  score: number;
}

export interface Suggestions {
  entries: SuggestionEntry[];
  fallback: boolean;
  model_version: string;
}

export interface ModelInfo {
  method: string;
  model_version: string;
  n_training_pairs: number;
  n_confirmations: number;
  n_library_names: number;
  default_k: number;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
    this.name = 'ApiError';
  }
}

async function detailOf(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.detail === 'string') return body.detail;
  } catch {
    // fall through to the generic message
  }
  return `request failed with status ${response.status}`;
}

export class ApiClient {
  constructor(
    private baseUrl: string = '',
    private fetchFn: typeof fetch = fetch,
  ) {}

  private async post(path: string, body: unknown): Promise<Response> {
    return this.fetchFn(this.baseUrl + path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  async suggest(signal: string, k?: number): Promise<Suggestions> {
    const response = await this.post('/api/suggest', k === undefined ? { signal } : { signal, k });
    if (!response.ok) throw new ApiError(response.status, await detailOf(response));
    return (await response.json()) as Suggestions;
  }

  async confirm(signal: string, chosen: string, source: string): Promise<void> {
    const response = await this.post('/api/confirm', { signal, chosen, source });
    if (response.status !== 201) throw new ApiError(response.status, await detailOf(response));
  }

  async rebuild(): Promise<string> {
    const response = await this.post('/api/rebuild', {});
    if (!response.ok) throw new ApiError(response.status, await detailOf(response));
    const body = (await response.json()) as { model_version: string };
    return body.model_version;
  }

  async modelInfo(): Promise<ModelInfo> {
    const response = await this.fetchFn(this.baseUrl + '/api/model');
    if (!response.ok) throw new ApiError(response.status, await detailOf(response));
    return (await response.json()) as ModelInfo;
  }
}
