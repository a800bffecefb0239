// Thin client for the documented service endpoints.

import type { Bookmark, Recommendations, SchemaColumn } from './types';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface UploadResult {
  dataset_id: string;
  status: string;
  schema: SchemaColumn[];
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function asJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = await resp.json();
      detail = body.error ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return resp.json() as Promise<T>;
}

export class Api {
  constructor(
    private baseUrl = '',
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async getRecommendations(
    datasetId: string,
    attributes: string[] = [],
    opts: { topR?: number; topK?: number } = {},
  ): Promise<Recommendations> {
    const params = new URLSearchParams();
    if (attributes.length) params.set('attributes', attributes.join(','));
    if (opts.topR !== undefined) params.set('top_r', String(opts.topR));
    if (opts.topK !== undefined) params.set('top_k', String(opts.topK));
    const qs = params.toString();
    const url = `${this.baseUrl}/datasets/${encodeURIComponent(datasetId)}/recommendations${qs ? `?${qs}` : ''}`;
    return asJson(await this.fetchFn(url));
  }

  async uploadDataset(file: Blob, filename: string): Promise<UploadResult> {
    const body = new FormData();
    body.append('file', file, filename);
    return asJson(await this.fetchFn(`${this.baseUrl}/datasets`, { method: 'POST', body }));
  }

  async createBookmark(
    datasetId: string,
    insightTypeId: string,
    columns: string[],
  ): Promise<Bookmark> {
    return asJson(
      await this.fetchFn(`${this.baseUrl}/bookmarks`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({
          dataset_id: datasetId,
          insight_type_id: insightTypeId,
          combination: { columns },
        }),
      }),
    );
  }

  async deleteBookmark(bookmarkId: string): Promise<void> {
    await asJson(
      await this.fetchFn(`${this.baseUrl}/bookmarks/${encodeURIComponent(bookmarkId)}`, {
        method: 'DELETE',
      }),
    );
  }

  async listBookmarks(datasetId?: string): Promise<Bookmark[]> {
    const qs = datasetId ? `?dataset_id=${encodeURIComponent(datasetId)}` : '';
    return asJson(await this.fetchFn(`${this.baseUrl}/bookmarks${qs}`));
  }
}
