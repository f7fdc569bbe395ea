/** Stream event types and parsing for the caption service wire format. */

export interface RgbaColor {
  r: number;
  g: number;
  b: number;
  a: number;
}

export type BubbleShape = "rectangular" | "rounded" | "lightning";
export type CaptionPosition = "top" | "middle" | "bottom";
export type DisplayMode = "scroll" | "top" | "bottom";

export interface RenderSpec {
  fill: RgbaColor;
  shape: BubbleShape;
  font_size_px: number;
  position: CaptionPosition;
  display_start_ms: number;
  display_end_ms: number;
  obscure_danmaku: boolean;
  geometry_svg_path: string;
}

export interface DanmakuPayload {
  id: number;
  video_id: string;
  video_time_ms: number;
  wall_time_ms: number;
  text: string;
  user_hash: string;
  display_color: number;
  display_mode: DisplayMode;
}

export interface CaptionPayload {
  window_index: number;
  text: string;
  style: string;
  pov: string;
  source: string;
  render: RenderSpec;
}

export interface AdminSettings {
  window_duration_s: number;
  comment_threshold: number;
  style_policy: string;
  pov_policy: string;
  display_position: string;
  obscure_danmaku: boolean;
  danmaku_scale: number;
  embedding_method: string;
  caption_backend: string;
  trigger_weight: number;
}

export type StreamEvent =
  | { type: "danmaku"; seq: number; payload: DanmakuPayload }
  | { type: "caption"; seq: number; payload: CaptionPayload }
  | { type: "settings"; seq: number; payload: AdminSettings }
  | { type: "heartbeat"; seq: number; payload: Record<string, never> };

export class WireFormatError extends Error {}

function fail(msg: string): never {
  throw new WireFormatError(msg);
}

function requireKeys(obj: Record<string, unknown>, keys: string[], what: string): void {
  for (const key of keys) {
    if (!(key in obj)) fail(`${what} missing key: ${key}`);
  }
}

function asObject(value: unknown, what: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    fail(`${what} must be an object`);
  }
  return value as Record<string, unknown>;
}

const DANMAKU_KEYS = [
  "id", "video_id", "video_time_ms", "wall_time_ms", "text",
  "user_hash", "display_color", "display_mode",
];
const CAPTION_KEYS = ["window_index", "text", "style", "pov", "source", "render"];
const RENDER_KEYS = [
  "fill", "shape", "font_size_px", "position", "display_start_ms",
  "display_end_ms", "obscure_danmaku", "geometry_svg_path",
];
export const SETTINGS_KEYS = [
  "window_duration_s", "comment_threshold", "style_policy", "pov_policy",
  "display_position", "obscure_danmaku", "danmaku_scale", "embedding_method",
  "caption_backend", "trigger_weight",
];

/** Parse one text frame from the event stream. Throws WireFormatError. */
export function parseEvent(line: string): StreamEvent {
  let doc: unknown;
  try {
    doc = JSON.parse(line);
  } catch {
    fail(`not JSON: ${line.slice(0, 80)}`);
  }
  const obj = asObject(doc, "event");
  const type = obj.type;
  const seq = obj.seq;
  if (type !== "danmaku" && type !== "caption" && type !== "settings" && type !== "heartbeat") {
    fail(`unknown event type: ${String(type)}`);
  }
  if (typeof seq !== "number" || !Number.isInteger(seq) || seq < 1) {
    fail(`bad seq: ${String(seq)}`);
  }
  const payload = asObject(obj.payload, "payload");
  if (type === "danmaku") {
    requireKeys(payload, DANMAKU_KEYS, "danmaku payload");
  } else if (type === "caption") {
    requireKeys(payload, CAPTION_KEYS, "caption payload");
    const render = asObject(payload.render, "render");
    requireKeys(render, RENDER_KEYS, "render spec");
    const start = render.display_start_ms;
    const end = render.display_end_ms;
    if (typeof start !== "number" || typeof end !== "number" || end <= start) {
      fail(`bad caption interval: [${String(start)}, ${String(end)})`);
    }
  } else if (type === "settings") {
    requireKeys(payload, SETTINGS_KEYS, "settings payload");
  }
  return { type, seq, payload } as StreamEvent;
}

/** CSS color string for a render fill. */
export function rgbaCss(c: RgbaColor): string {
  return `rgba(${c.r},${c.g},${c.b},${c.a})`;
}

/** CSS color for a danmaku 24-bit integer color. */
export function colorIntCss(value: number): string {
  const n = value >>> 0 & 0xffffff;
  return `#${n.toString(16).padStart(6, "0")}`;
}

const STYLE_NAMES = ["expository", "humorous_praise", "tsukkomi"];
export const STYLE_POLICIES = [
  "revised", "original",
  ...STYLE_NAMES.map((s) => `fixed:${s}`),
];
export const POV_POLICIES = ["blend", "first", "third"];
export const DISPLAY_POSITIONS = ["top", "middle", "bottom"];
export const EMBEDDING_METHODS = ["overlay"];
export const CAPTION_BACKENDS = ["template", "llm"];
export const WINDOW_DURATIONS = [8, 12];

/**
 * Client-side settings validation, mirroring the server's domains so the
 * admin panel can reject bad values before a round trip.  Returns one
 * message per offending field; empty means acceptable.
 */
export function validateSettings(patch: Partial<AdminSettings>): string[] {
  const errors: string[] = [];
  const has = (k: keyof AdminSettings) => patch[k] !== undefined;
  if (has("window_duration_s") && !WINDOW_DURATIONS.includes(patch.window_duration_s!)) {
    errors.push(`window_duration_s must be one of ${WINDOW_DURATIONS.join(", ")}`);
  }
  if (has("comment_threshold")) {
    const v = patch.comment_threshold!;
    if (!Number.isFinite(v) || v < 0) errors.push("comment_threshold must be finite and >= 0");
  }
  if (has("style_policy") && !STYLE_POLICIES.includes(patch.style_policy!)) {
    errors.push(`bad style_policy: ${patch.style_policy}`);
  }
  if (has("pov_policy") && !POV_POLICIES.includes(patch.pov_policy!)) {
    errors.push(`bad pov_policy: ${patch.pov_policy}`);
  }
  if (has("display_position") && !DISPLAY_POSITIONS.includes(patch.display_position!)) {
    errors.push(`bad display_position: ${patch.display_position}`);
  }
  if (has("danmaku_scale")) {
    const v = patch.danmaku_scale!;
    if (!(v > 0 && v <= 3)) errors.push(`danmaku_scale must be in (0, 3], got ${v}`);
  }
  if (has("embedding_method") && !EMBEDDING_METHODS.includes(patch.embedding_method!)) {
    errors.push(`bad embedding_method: ${patch.embedding_method}`);
  }
  if (has("caption_backend") && !CAPTION_BACKENDS.includes(patch.caption_backend!)) {
    errors.push(`bad caption_backend: ${patch.caption_backend}`);
  }
  if (has("trigger_weight")) {
    const v = patch.trigger_weight!;
    if (!(v > 0)) errors.push(`trigger_weight must be > 0, got ${v}`);
  }
  return errors;
}
