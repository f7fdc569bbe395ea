// @vitest-environment happy-dom
// @vitest-environment-options {"happyDOM": {"url": "http://127.0.0.1:18123"}}
//
// End-to-end run against a real service process: the admin panel's
// settings round-trip, and a window duration change visibly lengthening
// the caption display interval.  Spawns `impactcap serve` on the port
// above (fixed so the page shares the server's origin and fetch skips
// CORS preflights); the whole file must finish inside two minutes.
import { spawn } from "node:child_process";
import type { ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { request as httpRequest } from "node:http";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { AdminPanel } from "../src/admin.js";
import { ApiClient } from "../src/api.js";

const PORT = 18123; // must match the environment URL in the docblock
const BASE = `http://127.0.0.1:${PORT}`;
const VIDEO = "ui-demo";
const TOKEN = "modtok";

// happy-dom's fetch preflights requests it considers cross-origin, which
// the API does not speak; going through node:http keeps the transport
// boring while the components under test stay fully real.
function nodeFetch(input: string, init?: RequestInit): Promise<Response> {
  return new Promise((resolve, reject) => {
    const url = new URL(input);
    const req = httpRequest(url, {
      method: init?.method ?? "GET",
      headers: (init?.headers as Record<string, string>) ?? {},
    }, (res) => {
      const chunks: Buffer[] = [];
      res.on("data", (chunk) => chunks.push(chunk));
      res.on("end", () => {
        resolve(new Response(Buffer.concat(chunks).toString("utf-8"), {
          status: res.statusCode ?? 0,
        }));
      });
    });
    req.on("error", reject);
    if (init?.body !== undefined) req.write(String(init.body));
    req.end();
  });
}

let proc: ChildProcess | null = null;
let dataDir = "";
let serverLog = "";
let startedAt = 0;

const api = new ApiClient(BASE, nodeFetch);

async function waitHealthy(deadlineMs: number): Promise<void> {
  const until = Date.now() + deadlineMs;
  let lastErr: unknown = null;
  while (Date.now() < until) {
    try {
      const doc = await api.health();
      if (doc.status === "ok") return;
    } catch (err) {
      lastErr = err;
    }
    await sleep(250);
  }
  throw new Error(`server never became healthy: ${String(lastErr)}\n${serverLog}`);
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

async function submit(text: string, videoTimeMs: number, tag: string): Promise<void> {
  await api.submitDanmaku(VIDEO, text, videoTimeMs, `int-${tag}`);
}

async function captions(): Promise<{ start: number; end: number }[]> {
  const list = await api.getCaptions(VIDEO);
  return list.map((c) => ({
    start: c.render.display_start_ms,
    end: c.render.display_end_ms,
  }));
}

async function pollCaptions(count: number, deadlineMs: number) {
  const until = Date.now() + deadlineMs;
  for (;;) {
    const current = await captions();
    if (current.length >= count) return current;
    if (Date.now() >= until) {
      throw new Error(`expected ${count} captions, have ${JSON.stringify(current)}`);
    }
    await sleep(200);
  }
}

beforeAll(async () => {
  startedAt = Date.now();
  dataDir = mkdtempSync(join(tmpdir(), "webui-int-"));
  const cfgPath = join(dataDir, "svc.json");
  writeFileSync(cfgPath, JSON.stringify({
    data_dir: join(dataDir, "data"),
    moderator_token: TOKEN,
    heartbeat_interval_s: 30.0,
  }));
  proc = spawn("impactcap", ["serve", "--config", cfgPath, "--port", String(PORT)],
               { stdio: ["ignore", "pipe", "pipe"] });
  proc.stdout?.on("data", (chunk) => { serverLog += String(chunk); });
  proc.stderr?.on("data", (chunk) => { serverLog += String(chunk); });
  await waitHealthy(30000);
  await api.registerVideo({ video_id: VIDEO, title: "integration demo" });
}, 45000);

afterAll(async () => {
  if (proc) {
    const exited = new Promise((resolve) => proc!.once("exit", resolve));
    proc.kill("SIGTERM");
    await Promise.race([exited, sleep(5000)]);
    if (proc.exitCode === null) proc.kill("SIGKILL");
  }
  rmSync(dataDir, { recursive: true, force: true });
});

describe("live service", () => {
  it("produces a caption with the default window duration", async () => {
    for (let i = 0; i < 4; i++) {
      await submit("666", i * 1000, `a${i}`);
    }
    await submit("平常心", 8500, "a-close");
    const got = await pollCaptions(1, 20000);
    expect(got[0]).toEqual({ start: 8000, end: 16000 });
  }, 40000);

  it("admin panel edits round-trip to an identical fresh GET", async () => {
    const root = document.createElement("div");
    document.body.append(root);
    const panel = new AdminPanel(root, api, VIDEO);
    await panel.load();
    expect(panel.current?.window_duration_s).toBe(8);

    const select = root.querySelector('[name="window_duration_s"]') as HTMLSelectElement;
    select.value = "12";
    select.dispatchEvent(new Event("change", { bubbles: true }));
    panel.tokenInput.value = TOKEN;
    await panel.apply();

    expect(panel.status.textContent).toBe("applied");
    expect(panel.current?.window_duration_s).toBe(12);

    const fresh = await api.getSettings(VIDEO);
    expect(fresh).toEqual(panel.current);
    expect(panel.readForm()).toEqual(fresh);
  }, 20000);

  it("the new duration visibly lengthens the caption display interval", async () => {
    for (let i = 0; i < 4; i++) {
      await submit("666", 24000 + i * 1000, `c${i}`);
    }
    await submit("平常心", 45000, "c-close");
    const got = await pollCaptions(2, 20000);

    const first = got[0];
    const last = got[got.length - 1];
    expect(first.end - first.start).toBe(8000);
    expect(last.end - last.start).toBe(12000);
    expect(last.start).toBeGreaterThanOrEqual(first.end);

    expect(Date.now() - startedAt).toBeLessThan(120000);
  }, 40000);
});
