/** Typed HTTP client for the caption service. */

import type { AdminSettings, CaptionPayload } from "./wire.js";

export interface VideoSummary {
  video_id: string;
  title: string;
  duration_ms: number;
  danmaku_count: number;
}

export interface VideoDetail {
  video_id: string;
  title: string;
  duration_ms: number;
  settings: AdminSettings;
  danmaku_count: number;
  next_seq: number;
  model_ref?: string;
  preloaded_log_ref?: string;
}

export interface SubmitAck {
  id: number;
  seq: number;
}

export class ApiError extends Error {
  status: number;
  detail: string;

  constructor(status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
    this.status = status;
    this.detail = detail;
  }
}

type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  base: string;
  private fetchFn: FetchFn;

  constructor(base = "", fetchFn?: FetchFn) {
    this.base = base.replace(/\/$/, "");
    // bind: browsers reject fetch called without its window receiver
    this.fetchFn = fetchFn ?? fetch.bind(globalThis);
  }

  private async request(method: string, path: string, body?: unknown,
                        headers?: Record<string, string>): Promise<unknown> {
    const init: RequestInit = { method, headers: { ...headers } };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      (init.headers as Record<string, string>)["Content-Type"] = "application/json";
    }
    const response = await this.fetchFn(this.base + path, init);
    let doc: unknown = null;
    try {
      doc = await response.json();
    } catch {
      // non-JSON error body; detail stays generic
    }
    if (!response.ok) {
      const detail =
        typeof doc === "object" && doc !== null && "detail" in doc
          ? String((doc as { detail: unknown }).detail)
          : response.statusText || "request failed";
      throw new ApiError(response.status, detail);
    }
    return doc;
  }

  async health(): Promise<{ status: string }> {
    return (await this.request("GET", "/healthz")) as { status: string };
  }

  async listVideos(): Promise<VideoSummary[]> {
    const doc = (await this.request("GET", "/api/videos")) as { videos: VideoSummary[] };
    return doc.videos;
  }

  async getVideo(videoId: string): Promise<VideoDetail> {
    return (await this.request(
      "GET", `/api/videos/${encodeURIComponent(videoId)}`,
    )) as VideoDetail;
  }

  async registerVideo(body: {
    video_id?: string;
    title?: string;
    duration_ms?: number;
    settings?: Partial<AdminSettings>;
    preloaded_log_xml?: string;
  }): Promise<{ video: VideoDetail; message_count: number }> {
    return (await this.request("POST", "/api/videos", body)) as {
      video: VideoDetail;
      message_count: number;
    };
  }

  async submitDanmaku(videoId: string, text: string, videoTimeMs: number,
                      clientId: string, extra?: {
                        display_color?: number;
                        display_mode?: string;
                        user_hash?: string;
                      }): Promise<SubmitAck> {
    return (await this.request(
      "POST",
      `/api/videos/${encodeURIComponent(videoId)}/danmaku`,
      { text, video_time_ms: videoTimeMs, ...extra },
      { "X-Client-Id": clientId },
    )) as SubmitAck;
  }

  async getSettings(videoId: string): Promise<AdminSettings> {
    return (await this.request(
      "GET", `/api/videos/${encodeURIComponent(videoId)}/settings`,
    )) as AdminSettings;
  }

  async putSettings(videoId: string, patch: Partial<AdminSettings>,
                    token: string): Promise<AdminSettings> {
    const headers: Record<string, string> = {};
    if (token) headers.Authorization = `Bearer ${token}`;
    return (await this.request(
      "PUT", `/api/videos/${encodeURIComponent(videoId)}/settings`,
      patch, headers,
    )) as AdminSettings;
  }

  async getCaptions(videoId: string, fromMs?: number,
                    toMs?: number): Promise<CaptionPayload[]> {
    const params = new URLSearchParams();
    if (fromMs !== undefined) params.set("from_ms", String(fromMs));
    if (toMs !== undefined) params.set("to_ms", String(toMs));
    const query = params.toString();
    const path = `/api/videos/${encodeURIComponent(videoId)}/captions` +
      (query ? `?${query}` : "");
    const doc = (await this.request("GET", path)) as { captions: CaptionPayload[] };
    return doc.captions;
  }
}

/** WebSocket URL for a video's event stream, derived from the API base. */
export function streamUrl(base: string, videoId: string, fromSeq?: number): string {
  let origin = base.replace(/\/$/, "");
  if (!origin) {
    origin = typeof location !== "undefined" ? location.origin : "http://localhost";
  }
  const ws = origin.replace(/^http/, "ws");
  const suffix = fromSeq !== undefined ? `?from_seq=${fromSeq}` : "";
  return `${ws}/ws/videos/${encodeURIComponent(videoId)}${suffix}`;
}
