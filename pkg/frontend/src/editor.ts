/** Comment submission box under the player. */

import { ApiClient, ApiError } from "./api.js";

export interface EditorOptions {
  clientId: string;
  /** Current playback position; attached to each submitted message. */
  playbackMs: () => number;
}

/**
 * Submits through the HTTP API and never echoes locally: the message is
 * drawn only when it comes back on the event stream, so what the sender
 * sees is exactly what everyone else sees.
 */
export class DanmakuEditor {
  root: HTMLElement;
  input: HTMLInputElement;
  button: HTMLButtonElement;
  notice: HTMLElement;

  private api: ApiClient;
  private videoId: string;
  private opts: EditorOptions;

  constructor(root: HTMLElement, api: ApiClient, videoId: string, opts: EditorOptions) {
    this.root = root;
    this.api = api;
    this.videoId = videoId;
    this.opts = opts;

    const form = document.createElement("form");
    form.className = "editor";
    this.input = document.createElement("input");
    this.input.type = "text";
    this.input.placeholder = "发个弹幕";
    this.input.maxLength = 120;
    this.button = document.createElement("button");
    this.button.type = "submit";
    this.button.textContent = "发送";
    this.button.disabled = true;
    this.notice = document.createElement("span");
    this.notice.className = "editor-notice";
    form.append(this.input, this.button, this.notice);
    root.append(form);

    this.input.addEventListener("input", () => {
      this.button.disabled = this.input.value.trim() === "";
      this.notice.textContent = "";
    });
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.submit();
    });
  }

  async submit(): Promise<void> {
    const text = this.input.value.trim();
    if (!text) return;
    this.button.disabled = true;
    try {
      await this.api.submitDanmaku(this.videoId, text, this.opts.playbackMs(),
                                   this.opts.clientId);
      this.input.value = "";
      this.notice.textContent = "";
    } catch (err) {
      if (err instanceof ApiError) {
        this.notice.textContent = err.status === 429
          ? `慢一点: ${err.detail}`
          : err.detail;
        this.button.disabled = false;
        return;
      }
      this.notice.textContent = "network error";
      this.button.disabled = false;
    }
  }
}
