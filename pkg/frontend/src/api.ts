// Client for the search engine's JSON API. The response schema mirrors
// the server exactly; the UI never reorders or rewrites what it gets.

export interface PageEntry {
  id: number;
  url: string;
  title: string;
  score: number;
  terms: string[];
}

export interface ForestNode extends PageEntry {
  best_rank: number;
  end_ranks: number[];
  children: ForestNode[];
}

export interface FlatTrail {
  nodes: PageEntry[];
  scores: Record<string, number>;
  terms: string[];
}

export interface SearchResponse {
  query: string;
  elapsed_ms: number;
  forest: ForestNode[];
  flat_trails: FlatTrail[];
}

export interface PageInfo {
  id: number;
  url: string;
  title: string;
  outlinks: number[];
  inlinks: number[];
  pg: number;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
  const resp = await fetch(url, { signal });
  const body = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    const message = (body as { error?: string }).error ?? `HTTP ${resp.status}`;
    throw new ApiError(resp.status, message);
  }
  return body as T;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  search(query: string, signal?: AbortSignal): Promise<SearchResponse> {
    const q = encodeURIComponent(query);
    return getJson<SearchResponse>(`${this.base}/api/search?q=${q}`, signal);
  }

  page(id: number, signal?: AbortSignal): Promise<PageInfo> {
    return getJson<PageInfo>(`${this.base}/api/page/${id}`, signal);
  }
}
