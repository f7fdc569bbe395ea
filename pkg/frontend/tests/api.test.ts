import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, streamUrl } from "../src/api.js";

interface Recorded {
  url: string;
  method: string;
  headers: Record<string, string>;
  body: unknown;
}

function stubFetch(responder: (req: Recorded) => { status: number; body: unknown }) {
  const calls: Recorded[] = [];
  const fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    const recorded: Recorded = {
      url: input,
      method: init?.method ?? "GET",
      headers: (init?.headers as Record<string, string>) ?? {},
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    };
    calls.push(recorded);
    const { status, body } = responder(recorded);
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { calls, fetchFn };
}

describe("ApiClient", () => {
  it("fetches video detail from the expected path", async () => {
    const { calls, fetchFn } = stubFetch(() => ({
      status: 200,
      body: { video_id: "v1", title: "t", duration_ms: 0, danmaku_count: 2, next_seq: 3 },
    }));
    const api = new ApiClient("http://svc:9000", fetchFn);
    const detail = await api.getVideo("v1");
    expect(detail.video_id).toBe("v1");
    expect(calls[0].url).toBe("http://svc:9000/api/videos/v1");
    expect(calls[0].method).toBe("GET");
  });

  it("escapes video ids in paths", async () => {
    const { calls, fetchFn } = stubFetch(() => ({ status: 200, body: {} }));
    const api = new ApiClient("", fetchFn);
    await api.getVideo("a/b c");
    expect(calls[0].url).toBe("/api/videos/a%2Fb%20c");
  });

  it("submits danmaku with client id header and JSON body", async () => {
    const { calls, fetchFn } = stubFetch(() => ({
      status: 200, body: { id: 7, seq: 7 },
    }));
    const api = new ApiClient("", fetchFn);
    const ack = await api.submitDanmaku("v1", "前方高能", 12500, "client-a");
    expect(ack).toEqual({ id: 7, seq: 7 });
    expect(calls[0].method).toBe("POST");
    expect(calls[0].headers["X-Client-Id"]).toBe("client-a");
    expect(calls[0].headers["Content-Type"]).toBe("application/json");
    expect(calls[0].body).toEqual({ text: "前方高能", video_time_ms: 12500 });
  });

  it("sends the moderator token as a bearer header", async () => {
    const { calls, fetchFn } = stubFetch(() => ({ status: 200, body: {} }));
    const api = new ApiClient("", fetchFn);
    await api.putSettings("v1", { window_duration_s: 12 }, "secret");
    expect(calls[0].method).toBe("PUT");
    expect(calls[0].headers.Authorization).toBe("Bearer secret");
    expect(calls[0].body).toEqual({ window_duration_s: 12 });
  });

  it("omits the auth header when no token is set", async () => {
    const { calls, fetchFn } = stubFetch(() => ({ status: 200, body: {} }));
    const api = new ApiClient("", fetchFn);
    await api.putSettings("v1", {}, "");
    expect(calls[0].headers.Authorization).toBeUndefined();
  });

  it("raises ApiError with the server detail", async () => {
    const { fetchFn } = stubFetch(() => ({
      status: 429, body: { detail: "rate limited: too many messages in one second" },
    }));
    const api = new ApiClient("", fetchFn);
    const err = await api.submitDanmaku("v1", "x", 0, "c").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(429);
    expect(err.detail).toMatch(/rate limited/);
  });

  it("builds caption range queries", async () => {
    const { calls, fetchFn } = stubFetch(() => ({
      status: 200, body: { captions: [] },
    }));
    const api = new ApiClient("", fetchFn);
    await api.getCaptions("v1");
    await api.getCaptions("v1", 8000);
    await api.getCaptions("v1", 8000, 16000);
    expect(calls[0].url).toBe("/api/videos/v1/captions");
    expect(calls[1].url).toBe("/api/videos/v1/captions?from_ms=8000");
    expect(calls[2].url).toBe("/api/videos/v1/captions?from_ms=8000&to_ms=16000");
  });

  it("unwraps list responses", async () => {
    const { fetchFn } = stubFetch(() => ({
      status: 200,
      body: { videos: [{ video_id: "a", title: "", duration_ms: 0, danmaku_count: 0 }] },
    }));
    const api = new ApiClient("", fetchFn);
    const videos = await api.listVideos();
    expect(videos).toHaveLength(1);
    expect(videos[0].video_id).toBe("a");
  });
});

describe("streamUrl", () => {
  it("derives ws URLs from the http base", () => {
    expect(streamUrl("http://svc:9000", "v1")).toBe("ws://svc:9000/ws/videos/v1");
    expect(streamUrl("https://svc", "v1", 42)).toBe("wss://svc/ws/videos/v1?from_seq=42");
  });

  it("escapes the video id", () => {
    expect(streamUrl("http://h", "a b")).toBe("ws://h/ws/videos/a%20b");
  });
});
