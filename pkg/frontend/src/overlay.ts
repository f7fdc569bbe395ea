/** Overlay model: active danmaku and captions, drawn onto one canvas. */

import { LaneAllocator, PinnedLanes, scrollHeadX } from "./lanes.js";
import { colorIntCss, rgbaCss } from "./wire.js";
import type { CaptionPayload, DanmakuPayload } from "./wire.js";

export const DANMAKU_TRAVERSE_MS = 8000;
export const PINNED_HOLD_MS = 4000;
export const DANMAKU_FONT_PX = 18;
export const LANE_HEIGHT_PX = 28;
export const OBSCURED_ALPHA = 0.25;

/** The slice of CanvasRenderingContext2D the overlay draws with. */
export interface DrawSurface {
  globalAlpha: number;
  fillStyle: string | CanvasGradient | CanvasPattern;
  font: string;
  textAlign: CanvasTextAlign;
  textBaseline: CanvasTextBaseline;
  save(): void;
  restore(): void;
  translate(x: number, y: number): void;
  clearRect(x: number, y: number, w: number, h: number): void;
  fill(path: Path2D): void;
  fillText(text: string, x: number, y: number): void;
}

interface ActiveDanmaku {
  payload: DanmakuPayload;
  lane: number;
  enterMs: number;
  exitMs: number;
  widthPx: number;
}

interface ActiveCaption {
  payload: CaptionPayload;
  path: Path2D;
  boundsW: number;
  boundsH: number;
}

/**
 * Rough pixel width without a canvas: fullwidth CJK glyphs count as one
 * em, everything else as a bit over half.  Good enough for lane packing.
 */
export function estimateTextWidth(text: string, fontPx: number): number {
  let ems = 0;
  for (const ch of text) {
    ems += ch.codePointAt(0)! > 0x2e7f ? 1.0 : 0.55;
  }
  return Math.ceil(ems * fontPx);
}

/** Bounding box of an SVG path made of absolute M/L/Q/Z commands. */
export function pathBounds(d: string): { w: number; h: number } {
  const numbers = d.match(/-?\d+(?:\.\d+)?(?:e-?\d+)?/gi);
  if (!numbers || numbers.length < 4) return { w: 0, h: 0 };
  let minX = Infinity, minY = Infinity, maxX = -Infinity, maxY = -Infinity;
  for (let i = 0; i + 1 < numbers.length; i += 2) {
    const x = parseFloat(numbers[i]);
    const y = parseFloat(numbers[i + 1]);
    minX = Math.min(minX, x);
    minY = Math.min(minY, y);
    maxX = Math.max(maxX, x);
    maxY = Math.max(maxY, y);
  }
  return { w: maxX - minX, h: maxY - minY };
}

export interface OverlayOptions {
  /** Injectable for tests; defaults to the browser Path2D constructor. */
  path2d?: (d: string) => Path2D;
  measure?: (text: string, fontPx: number) => number;
}

/**
 * Tracks what is on screen at a given playback time and draws it.
 *
 * Caption styling is taken verbatim from each event's render spec: the
 * wire fill color, bubble geometry path, font size, screen position, and
 * display interval.  Nothing visual is decided on this side.  While a
 * caption whose spec asks for it is visible, danmaku drop to low opacity
 * so the bubble reads clearly.
 */
export class OverlayModel {
  width: number;
  height: number;
  scale = 1.0;

  private scrollLanes: LaneAllocator;
  private topLanes: PinnedLanes;
  private bottomLanes: PinnedLanes;
  private danmaku: ActiveDanmaku[] = [];
  private captions: ActiveCaption[] = [];
  private path2d: (d: string) => Path2D;
  private measure: (text: string, fontPx: number) => number;

  constructor(width: number, height: number, opts: OverlayOptions = {}) {
    this.width = width;
    this.height = height;
    this.path2d = opts.path2d ?? ((d) => new Path2D(d));
    this.measure = opts.measure ?? estimateTextWidth;
    this.scrollLanes = new LaneAllocator(this.laneCount(), width, DANMAKU_TRAVERSE_MS);
    this.topLanes = new PinnedLanes(this.laneCount(), PINNED_HOLD_MS);
    this.bottomLanes = new PinnedLanes(this.laneCount(), PINNED_HOLD_MS);
  }

  laneHeight(): number {
    return Math.max(12, Math.round(LANE_HEIGHT_PX * this.scale));
  }

  fontPx(): number {
    return Math.max(8, Math.round(DANMAKU_FONT_PX * this.scale));
  }

  laneCount(): number {
    return Math.max(1, Math.floor((this.height * 0.85) / this.laneHeight()));
  }

  setScale(scale: number): void {
    if (scale === this.scale) return;
    this.scale = scale;
    this.scrollLanes = new LaneAllocator(this.laneCount(), this.width, DANMAKU_TRAVERSE_MS);
    this.topLanes = new PinnedLanes(this.laneCount(), PINNED_HOLD_MS);
    this.bottomLanes = new PinnedLanes(this.laneCount(), PINNED_HOLD_MS);
  }

  addDanmaku(payload: DanmakuPayload): void {
    const widthPx = this.measure(payload.text, this.fontPx());
    const at = payload.video_time_ms;
    let slot;
    if (payload.display_mode === "top") {
      slot = this.topLanes.place(at);
    } else if (payload.display_mode === "bottom") {
      slot = this.bottomLanes.place(at);
    } else {
      slot = this.scrollLanes.place(at, widthPx);
    }
    this.danmaku.push({ payload, widthPx, ...slot });
  }

  addCaption(payload: CaptionPayload): void {
    const render = payload.render;
    if (render.display_end_ms <= render.display_start_ms) return;
    const { w, h } = pathBounds(render.geometry_svg_path);
    this.captions.push({
      payload,
      path: this.path2d(render.geometry_svg_path),
      boundsW: w,
      boundsH: h,
    });
  }

  prune(nowMs: number): void {
    this.danmaku = this.danmaku.filter((d) => d.exitMs > nowMs);
    this.captions = this.captions.filter(
      (c) => c.payload.render.display_end_ms > nowMs,
    );
  }

  activeDanmaku(nowMs: number): DanmakuPayload[] {
    return this.danmaku
      .filter((d) => d.enterMs <= nowMs && nowMs < d.exitMs)
      .map((d) => d.payload);
  }

  activeCaptions(nowMs: number): CaptionPayload[] {
    return this.captions
      .filter((c) => c.payload.render.display_start_ms <= nowMs
        && nowMs < c.payload.render.display_end_ms)
      .map((c) => c.payload);
  }

  /** True when a visible caption asks for danmaku to be dimmed. */
  obscured(nowMs: number): boolean {
    return this.activeCaptions(nowMs).some((c) => c.render.obscure_danmaku);
  }

  private captionAnchor(c: ActiveCaption): { x: number; y: number } {
    const x = Math.round((this.width - c.boundsW) / 2);
    const pos = c.payload.render.position;
    let y: number;
    if (pos === "top") {
      y = Math.round(this.height * 0.08);
    } else if (pos === "middle") {
      y = Math.round((this.height - c.boundsH) / 2);
    } else {
      y = Math.round(this.height * 0.92 - c.boundsH);
    }
    return { x, y };
  }

  draw(ctx: DrawSurface, nowMs: number): void {
    this.prune(nowMs);
    ctx.clearRect(0, 0, this.width, this.height);
    const dimmed = this.obscured(nowMs);
    const laneH = this.laneHeight();
    const fontPx = this.fontPx();

    ctx.save();
    ctx.globalAlpha = dimmed ? OBSCURED_ALPHA : 1.0;
    ctx.font = `${fontPx}px sans-serif`;
    ctx.textBaseline = "top";
    for (const d of this.danmaku) {
      if (d.enterMs > nowMs || nowMs >= d.exitMs) continue;
      ctx.fillStyle = colorIntCss(d.payload.display_color);
      if (d.payload.display_mode === "scroll") {
        ctx.textAlign = "left";
        const x = scrollHeadX(this.width, d.widthPx, DANMAKU_TRAVERSE_MS,
                              d.enterMs, nowMs);
        ctx.fillText(d.payload.text, x, d.lane * laneH + 2);
      } else if (d.payload.display_mode === "top") {
        ctx.textAlign = "center";
        ctx.fillText(d.payload.text, this.width / 2, d.lane * laneH + 2);
      } else {
        ctx.textAlign = "center";
        const y = this.height - (d.lane + 1) * laneH + 2;
        ctx.fillText(d.payload.text, this.width / 2, y);
      }
    }
    ctx.restore();

    for (const c of this.captions) {
      const render = c.payload.render;
      if (render.display_start_ms > nowMs || nowMs >= render.display_end_ms) continue;
      const { x, y } = this.captionAnchor(c);
      ctx.save();
      ctx.translate(x, y);
      ctx.fillStyle = rgbaCss(render.fill);
      ctx.fill(c.path);
      ctx.fillStyle = "#ffffff";
      ctx.font = `${render.font_size_px}px sans-serif`;
      ctx.textAlign = "center";
      ctx.textBaseline = "middle";
      ctx.fillText(c.payload.text, c.boundsW / 2, c.boundsH / 2);
      ctx.restore();
    }
  }
}
