/** Typed client for the read-only task-graph API, with ETag caching. */

import { ClipResolution, TaskGraph, TaskSummary } from "./types.js";

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  private graphCache = new Map<string, { etag: string | null; graph: TaskGraph }>();

  constructor(
    readonly baseUrl: string,
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async listTasks(): Promise<TaskSummary[]> {
    const response = await this.fetchFn(this.url("/api/tasks"));
    if (!response.ok) throw new ApiError(response.status, "failed to list tasks");
    return (await response.json()) as TaskSummary[];
  }

  async getGraph(slug: string): Promise<TaskGraph> {
    const cached = this.graphCache.get(slug);
    const headers: Record<string, string> = {};
    if (cached?.etag) headers["If-None-Match"] = cached.etag;
    const response = await this.fetchFn(this.url(`/api/tasks/${encodeURIComponent(slug)}/graph`), {
      headers,
    });
    if (response.status === 304 && cached) return cached.graph;
    if (!response.ok) throw new ApiError(response.status, `no graph for task ${slug}`);
    const graph = (await response.json()) as TaskGraph;
    this.graphCache.set(slug, { etag: response.headers.get("etag"), graph });
    return graph;
  }

  async resolveClip(videoId: string, startS: number, endS: number): Promise<ClipResolution> {
    const query = `?start_s=${startS}&end_s=${endS}`;
    const response = await this.fetchFn(
      this.url(`/api/clips/${encodeURIComponent(videoId)}${query}`),
    );
    if (!response.ok) throw new ApiError(response.status, `cannot resolve clip ${videoId}`);
    return (await response.json()) as ClipResolution;
  }
}
