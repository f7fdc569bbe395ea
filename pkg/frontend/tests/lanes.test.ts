import { describe, expect, it } from "vitest";

import { LaneAllocator, PinnedLanes, scrollHeadX, scrollSpeed } from "../src/lanes.js";

const WIDTH = 960;
const TRAVERSE = 8000;

describe("scroll geometry", () => {
  it("crosses the full span in exactly the traverse time", () => {
    const w = 120;
    expect(scrollHeadX(WIDTH, w, TRAVERSE, 0, 0)).toBe(WIDTH);
    // tail (head + w) reaches the left edge at the end of the traverse
    expect(scrollHeadX(WIDTH, w, TRAVERSE, 0, TRAVERSE) + w).toBe(0);
  });

  it("wider items move faster", () => {
    expect(scrollSpeed(WIDTH, 300, TRAVERSE)).toBeGreaterThan(scrollSpeed(WIDTH, 50, TRAVERSE));
  });
});

describe("LaneAllocator", () => {
  it("puts the first item in lane 0 at its requested time", () => {
    const lanes = new LaneAllocator(5, WIDTH, TRAVERSE);
    expect(lanes.place(1000, 100)).toEqual({ lane: 0, enterMs: 1000, exitMs: 9000 });
  });

  it("spreads simultaneous items across lanes", () => {
    const lanes = new LaneAllocator(5, WIDTH, TRAVERSE);
    const slots = [0, 1, 2].map(() => lanes.place(0, 100));
    expect(slots.map((s) => s.lane)).toEqual([0, 1, 2]);
    expect(slots.every((s) => s.enterMs === 0)).toBe(true);
  });

  it("reuses a lane once the previous tail has cleared the right edge", () => {
    const lanes = new LaneAllocator(1, WIDTH, TRAVERSE);
    const first = lanes.place(0, 100);
    expect(first.lane).toBe(0);
    // tail clears at w / v = 100 / ((960+100)/8000) ~ 754.7ms
    const second = lanes.place(5000, 100);
    expect(second.lane).toBe(0);
    expect(second.enterMs).toBe(5000);
  });

  it("delays entry instead of overlapping when every lane is busy", () => {
    const lanes = new LaneAllocator(1, WIDTH, TRAVERSE);
    lanes.place(0, 400);
    const queued = lanes.place(100, 400);
    expect(queued.lane).toBe(0);
    expect(queued.enterMs).toBeGreaterThan(100);
  });

  it("rejects a zero lane count", () => {
    expect(() => new LaneAllocator(0, WIDTH, TRAVERSE)).toThrowError(/laneCount/);
  });

  it("never overlaps two items in one lane (randomized)", () => {
    // deterministic LCG so failures reproduce
    let state = 12345;
    const rand = () => {
      state = (state * 1103515245 + 12345) % 2147483648;
      return state / 2147483648;
    };
    const lanes = new LaneAllocator(6, WIDTH, TRAVERSE);
    const placed: { lane: number; enterMs: number; widthPx: number }[] = [];
    let t = 0;
    for (let i = 0; i < 200; i++) {
      t += Math.floor(rand() * 700);
      const widthPx = 40 + Math.floor(rand() * 400);
      const slot = lanes.place(t, widthPx);
      expect(slot.enterMs).toBeGreaterThanOrEqual(t);
      placed.push({ lane: slot.lane, enterMs: slot.enterMs, widthPx });
    }
    const horizon = Math.max(...placed.map((p) => p.enterMs)) + TRAVERSE;
    for (let now = 0; now <= horizon; now += 50) {
      const occupied = new Map<number, Array<[number, number]>>();
      for (const p of placed) {
        if (now < p.enterMs || now >= p.enterMs + TRAVERSE) continue;
        const head = scrollHeadX(WIDTH, p.widthPx, TRAVERSE, p.enterMs, now);
        const span: [number, number] = [head, head + p.widthPx];
        const spans = occupied.get(p.lane) ?? [];
        for (const [lo, hi] of spans) {
          const apart = span[1] <= lo + 1e-6 || span[0] >= hi - 1e-6;
          expect(apart).toBe(true);
        }
        spans.push(span);
        occupied.set(p.lane, spans);
      }
    }
  });
});

describe("PinnedLanes", () => {
  it("stacks concurrent items and reuses freed lanes", () => {
    const lanes = new PinnedLanes(3, 4000);
    expect(lanes.place(0).lane).toBe(0);
    expect(lanes.place(0).lane).toBe(1);
    expect(lanes.place(1000).lane).toBe(2);
    // lane 0 frees at 4000
    const reuse = lanes.place(4500);
    expect(reuse.lane).toBe(0);
    expect(reuse.enterMs).toBe(4500);
  });

  it("delays when all lanes are held", () => {
    const lanes = new PinnedLanes(1, 4000);
    lanes.place(0);
    const queued = lanes.place(1000);
    expect(queued.lane).toBe(0);
    expect(queued.enterMs).toBe(4000);
    expect(queued.exitMs).toBe(8000);
  });

  it("reset forgets all holds", () => {
    const lanes = new PinnedLanes(1, 4000);
    lanes.place(0);
    lanes.reset();
    expect(lanes.place(100).enterMs).toBe(100);
  });
});
