/** Moderator settings panel. */

import { ApiClient, ApiError } from "./api.js";
import {
  CAPTION_BACKENDS, DISPLAY_POSITIONS, EMBEDDING_METHODS, POV_POLICIES,
  STYLE_POLICIES, WINDOW_DURATIONS, validateSettings,
} from "./wire.js";
import type { AdminSettings } from "./wire.js";

interface FieldSpec {
  key: keyof AdminSettings;
  label: string;
  kind: "select" | "number" | "checkbox";
  options?: string[];
  step?: string;
  // single implemented choice today; shown but not editable
  disabled?: boolean;
}

const FIELDS: FieldSpec[] = [
  { key: "window_duration_s", label: "Window duration (s)", kind: "select",
    options: WINDOW_DURATIONS.map(String) },
  { key: "comment_threshold", label: "Comment threshold", kind: "number", step: "0.1" },
  { key: "trigger_weight", label: "Trigger weight", kind: "number", step: "0.1" },
  { key: "style_policy", label: "Style policy", kind: "select", options: STYLE_POLICIES },
  { key: "pov_policy", label: "Point of view", kind: "select", options: POV_POLICIES },
  { key: "display_position", label: "Caption position", kind: "select",
    options: DISPLAY_POSITIONS },
  { key: "obscure_danmaku", label: "Dim danmaku under captions", kind: "checkbox" },
  { key: "danmaku_scale", label: "Danmaku scale", kind: "number", step: "0.1" },
  { key: "embedding_method", label: "Embedding method", kind: "select",
    options: EMBEDDING_METHODS, disabled: true },
  { key: "caption_backend", label: "Caption backend", kind: "select",
    options: CAPTION_BACKENDS },
];

export interface AdminPanelOptions {
  /** Hides the apply controls for viewers without a moderator token. */
  readOnly?: boolean;
}

/**
 * One labeled control per tunable setting, validated locally against the
 * same domains the server enforces before anything is sent.  Apply PUTs
 * the form and reflects the server's echo; settings broadcast on the
 * stream update the form too, unless the moderator has unsaved edits.
 */
export class AdminPanel {
  root: HTMLElement;
  tokenInput: HTMLInputElement;
  applyButton: HTMLButtonElement;
  status: HTMLElement;
  current: AdminSettings | null = null;
  dirty = false;

  private api: ApiClient;
  private videoId: string;
  private readOnly: boolean;
  private controls = new Map<keyof AdminSettings, HTMLInputElement | HTMLSelectElement>();

  constructor(root: HTMLElement, api: ApiClient, videoId: string,
              opts: AdminPanelOptions = {}) {
    this.root = root;
    this.api = api;
    this.videoId = videoId;
    this.readOnly = opts.readOnly ?? false;

    const form = document.createElement("form");
    form.className = "admin";
    for (const spec of FIELDS) {
      const row = document.createElement("label");
      row.className = "admin-row";
      const caption = document.createElement("span");
      caption.textContent = spec.label;
      let control: HTMLInputElement | HTMLSelectElement;
      if (spec.kind === "select") {
        control = document.createElement("select");
        for (const option of spec.options!) {
          const el = document.createElement("option");
          el.value = option;
          el.textContent = option;
          control.append(el);
        }
      } else {
        control = document.createElement("input");
        control.type = spec.kind;
        if (spec.step) control.step = spec.step;
      }
      control.name = spec.key;
      if (spec.disabled || this.readOnly) control.disabled = true;
      control.addEventListener("input", () => { this.dirty = true; });
      control.addEventListener("change", () => { this.dirty = true; });
      row.append(caption, control);
      form.append(row);
      this.controls.set(spec.key, control);
    }

    this.tokenInput = document.createElement("input");
    this.tokenInput.type = "password";
    this.tokenInput.placeholder = "moderator token";
    this.tokenInput.className = "admin-token";
    this.applyButton = document.createElement("button");
    this.applyButton.type = "submit";
    this.applyButton.textContent = "Apply";
    this.status = document.createElement("div");
    this.status.className = "admin-status";
    if (!this.readOnly) {
      const actions = document.createElement("div");
      actions.className = "admin-actions";
      actions.append(this.tokenInput, this.applyButton);
      form.append(actions);
    }
    form.append(this.status);
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.apply();
    });
    root.append(form);
  }

  async load(): Promise<void> {
    const settings = await this.api.getSettings(this.videoId);
    this.setForm(settings);
  }

  setForm(settings: AdminSettings): void {
    this.current = settings;
    for (const [key, control] of this.controls) {
      const value = settings[key];
      if (control instanceof HTMLInputElement && control.type === "checkbox") {
        control.checked = Boolean(value);
      } else {
        control.value = String(value);
      }
    }
    this.dirty = false;
  }

  readForm(): AdminSettings {
    const out: Record<string, unknown> = {};
    for (const [key, control] of this.controls) {
      const spec = FIELDS.find((f) => f.key === key)!;
      if (spec.kind === "checkbox") {
        out[key] = (control as HTMLInputElement).checked;
      } else if (spec.kind === "number" || key === "window_duration_s") {
        out[key] = Number(control.value);
      } else {
        out[key] = control.value;
      }
    }
    return out as unknown as AdminSettings;
  }

  async apply(): Promise<void> {
    if (this.readOnly) return;
    const patch = this.readForm();
    const errors = validateSettings(patch);
    if (errors.length > 0) {
      this.status.textContent = errors.join("; ");
      return;
    }
    try {
      const echoed = await this.api.putSettings(this.videoId, patch,
                                                this.tokenInput.value.trim());
      this.setForm(echoed);
      this.status.textContent = "applied";
    } catch (err) {
      if (err instanceof ApiError) {
        if (err.status === 401) {
          this.status.textContent = "moderator token required";
          this.tokenInput.focus();
        } else if (err.status === 403) {
          this.status.textContent = "token rejected";
          this.tokenInput.focus();
        } else {
          this.status.textContent = err.detail;
        }
        return;
      }
      this.status.textContent = "network error";
    }
  }

  /** Settings broadcast on the event stream; applied unless mid-edit. */
  onSettingsEvent(settings: AdminSettings): void {
    if (this.dirty) {
      this.status.textContent = "settings changed elsewhere; reload to sync";
      this.current = settings;
      return;
    }
    this.setForm(settings);
  }
}
