/** Playback surface: video (or synthetic clock) plus the overlay canvas. */

import { OverlayModel } from "./overlay.js";

export interface PlayerOptions {
  width?: number;
  height?: number;
  /** Optional media URL; without one a synthetic clock drives playback. */
  src?: string;
  durationMs?: number;
}

/**
 * Owns the playback clock and repaints the overlay each frame.  When a
 * media URL is given the video element is the clock; otherwise a plain
 * timer stands in so streams can be watched against bare event logs.
 */
export class PlayerView {
  root: HTMLElement;
  overlay: OverlayModel;
  canvas: HTMLCanvasElement;
  video: HTMLVideoElement | null = null;

  private clockBase = 0;
  private clockStartedAt: number | null = null;
  private durationMs: number;
  private rafHandle = 0;
  private timeLabel: HTMLElement;
  private playButton: HTMLButtonElement;

  constructor(root: HTMLElement, opts: PlayerOptions = {}) {
    this.root = root;
    const width = opts.width ?? 960;
    const height = opts.height ?? 540;
    this.durationMs = opts.durationMs ?? 0;
    this.overlay = new OverlayModel(width, height);

    const stage = document.createElement("div");
    stage.className = "stage";
    stage.style.width = `${width}px`;
    stage.style.height = `${height}px`;
    if (opts.src) {
      this.video = document.createElement("video");
      this.video.src = opts.src;
      this.video.controls = true;
      this.video.width = width;
      this.video.height = height;
      stage.append(this.video);
    }
    this.canvas = document.createElement("canvas");
    this.canvas.width = width;
    this.canvas.height = height;
    this.canvas.className = "overlay";
    stage.append(this.canvas);
    root.append(stage);

    const bar = document.createElement("div");
    bar.className = "transport";
    this.playButton = document.createElement("button");
    this.playButton.textContent = "play";
    this.timeLabel = document.createElement("span");
    this.timeLabel.className = "clock";
    this.timeLabel.textContent = "0.0s";
    if (!this.video) {
      bar.append(this.playButton, this.timeLabel);
      this.playButton.addEventListener("click", () => this.togglePlay());
    } else {
      bar.append(this.timeLabel);
    }
    root.append(bar);
  }

  playbackMs(): number {
    if (this.video) return Math.floor(this.video.currentTime * 1000);
    if (this.clockStartedAt === null) return this.clockBase;
    const elapsed = performance.now() - this.clockStartedAt;
    const t = this.clockBase + elapsed;
    return this.durationMs > 0 ? Math.min(t, this.durationMs) : t;
  }

  togglePlay(): void {
    if (this.clockStartedAt === null) {
      this.clockStartedAt = performance.now();
      this.playButton.textContent = "pause";
    } else {
      this.clockBase = this.playbackMs();
      this.clockStartedAt = null;
      this.playButton.textContent = "play";
    }
  }

  seek(ms: number): void {
    if (this.video) {
      this.video.currentTime = ms / 1000;
      return;
    }
    this.clockBase = ms;
    if (this.clockStartedAt !== null) this.clockStartedAt = performance.now();
  }

  start(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const frame = () => {
      const now = this.playbackMs();
      this.overlay.draw(ctx, now);
      this.timeLabel.textContent = `${(now / 1000).toFixed(1)}s`;
      this.rafHandle = requestAnimationFrame(frame);
    };
    this.rafHandle = requestAnimationFrame(frame);
  }

  stop(): void {
    cancelAnimationFrame(this.rafHandle);
  }
}
