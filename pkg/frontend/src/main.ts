/** Page entry: hash routing and view assembly. */

import { AdminPanel } from "./admin.js";
import { ApiClient } from "./api.js";
import { DanmakuEditor } from "./editor.js";
import { PlayerView } from "./player.js";
import { EventStream } from "./stream.js";
import type { StreamStatus } from "./stream.js";
import type { StreamEvent } from "./wire.js";

type Route =
  | { view: "landing" }
  | { view: "watch"; videoId: string; src?: string }
  | { view: "admin"; videoId: string; src?: string };

export function parseHash(hash: string): Route {
  const raw = hash.replace(/^#\/?/, "");
  const [path, query] = raw.split("?", 2);
  const parts = path.split("/").filter(Boolean);
  const src = query
    ? new URLSearchParams(query).get("src") ?? undefined
    : undefined;
  if (parts[0] === "watch" && parts[1]) {
    return { view: "watch", videoId: decodeURIComponent(parts[1]), src };
  }
  if (parts[0] === "admin" && parts[1]) {
    return { view: "admin", videoId: decodeURIComponent(parts[1]), src };
  }
  return { view: "landing" };
}

function clientId(): string {
  try {
    const stored = localStorage.getItem("danmaku-client-id");
    if (stored) return stored;
    const fresh = `web-${Math.random().toString(36).slice(2, 10)}`;
    localStorage.setItem("danmaku-client-id", fresh);
    return fresh;
  } catch {
    return `web-${Math.random().toString(36).slice(2, 10)}`;
  }
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

async function renderLanding(root: HTMLElement, api: ApiClient): Promise<void> {
  root.replaceChildren();
  root.append(el("h1", undefined, "Live caption studio"));
  const list = el("ul", "video-list");
  root.append(list);
  try {
    const videos = await api.listVideos();
    if (videos.length === 0) {
      list.append(el("li", "empty", "no videos yet"));
    }
    for (const v of videos) {
      const item = el("li");
      const watch = el("a", undefined, v.title || v.video_id);
      watch.setAttribute("href", `#/watch/${encodeURIComponent(v.video_id)}`);
      const admin = el("a", "admin-link", "admin");
      admin.setAttribute("href", `#/admin/${encodeURIComponent(v.video_id)}`);
      item.append(watch, ` (${v.danmaku_count} comments) `, admin);
      list.append(item);
    }
  } catch {
    list.append(el("li", "empty", "service unreachable"));
  }

  const form = el("form", "register");
  form.append(el("h2", undefined, "Register a video"));
  const idInput = el("input") as HTMLInputElement;
  idInput.placeholder = "video id (optional)";
  const titleInput = el("input") as HTMLInputElement;
  titleInput.placeholder = "title";
  const button = el("button", undefined, "Register") as HTMLButtonElement;
  button.type = "submit";
  const note = el("span", "register-note");
  form.append(idInput, titleInput, button, note);
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    void (async () => {
      try {
        const body: { video_id?: string; title?: string } = {};
        if (idInput.value.trim()) body.video_id = idInput.value.trim();
        if (titleInput.value.trim()) body.title = titleInput.value.trim();
        const result = await api.registerVideo(body);
        location.hash = `#/watch/${encodeURIComponent(result.video.video_id)}`;
      } catch (err) {
        note.textContent = err instanceof Error ? err.message : "failed";
      }
    })();
  });
  root.append(form);
}

interface WatchHandles {
  stream: EventStream;
  player: PlayerView;
}

async function renderWatch(root: HTMLElement, api: ApiClient, videoId: string,
                           withAdmin: boolean, src?: string): Promise<WatchHandles> {
  root.replaceChildren();
  const back = el("a", "back", "← videos");
  back.setAttribute("href", "#/");
  root.append(back);

  const detail = await api.getVideo(videoId);
  root.append(el("h1", undefined, detail.title || detail.video_id));

  const layout = el("div", "layout");
  const main = el("div", "main");
  const side = el("div", "side");
  layout.append(main, side);
  root.append(layout);

  const player = new PlayerView(main, {
    src, durationMs: detail.duration_ms || 0,
  });
  player.overlay.setScale(detail.settings.danmaku_scale);

  const statusBadge = el("div", "stream-status", "connecting");
  side.append(statusBadge);

  new DanmakuEditor(main, api, videoId, {
    clientId: clientId(),
    playbackMs: () => player.playbackMs(),
  });

  let panel: AdminPanel | null = null;
  if (withAdmin) {
    side.append(el("h2", undefined, "Moderation"));
    const panelRoot = el("div");
    side.append(panelRoot);
    panel = new AdminPanel(panelRoot, api, videoId);
    await panel.load();
  }

  const stream = new EventStream(api.base, videoId, {
    onEvent: (event: StreamEvent) => {
      if (event.type === "danmaku") {
        player.overlay.addDanmaku(event.payload);
      } else if (event.type === "caption") {
        player.overlay.addCaption(event.payload);
      } else if (event.type === "settings") {
        player.overlay.setScale(event.payload.danmaku_scale);
        panel?.onSettingsEvent(event.payload);
      }
    },
    onStatus: (status: StreamStatus) => {
      statusBadge.textContent = status;
      statusBadge.classList.toggle("stalled", status === "reconnecting");
    },
  });
  stream.start(1);
  player.start();
  return { stream, player };
}

export function mount(root: HTMLElement, apiBase = ""): void {
  const api = new ApiClient(apiBase);
  let handles: WatchHandles | null = null;

  const route = async () => {
    if (handles) {
      handles.stream.stop();
      handles.player.stop();
      handles = null;
    }
    const parsed = parseHash(location.hash);
    if (parsed.view === "landing") {
      await renderLanding(root, api);
    } else {
      handles = await renderWatch(root, api, parsed.videoId,
                                  parsed.view === "admin", parsed.src);
    }
  };
  window.addEventListener("hashchange", () => { void route(); });
  void route();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mount(document.getElementById("app")!);
}
