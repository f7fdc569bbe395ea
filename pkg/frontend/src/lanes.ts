/** Lane allocation for scrolling and pinned danmaku. Pure; no DOM. */

export interface LaneSlot {
  lane: number;
  /** Effective entry time; later than requested when every lane is busy. */
  enterMs: number;
  exitMs: number;
}

interface LastScroll {
  enterMs: number;
  widthPx: number;
  speed: number;
}

/** Pixels per ms for an item of the given width crossing the canvas. */
export function scrollSpeed(canvasWidth: number, textWidth: number,
                            traverseMs: number): number {
  return (canvasWidth + textWidth) / traverseMs;
}

/** Head (leading edge) x position at time t for a scrolling item. */
export function scrollHeadX(canvasWidth: number, textWidth: number,
                            traverseMs: number, enterMs: number,
                            atMs: number): number {
  return canvasWidth - scrollSpeed(canvasWidth, textWidth, traverseMs) * (atMs - enterMs);
}

/**
 * Assigns right-to-left scrolling items to horizontal lanes so that two
 * items in one lane never overlap.  When no lane can take an item at its
 * requested time, entry is delayed to the earliest instant one can,
 * rather than ever drawing items on top of each other.
 *
 * With equal traverse times the follower/leader gap is linear in time, so
 * it is enough that the follower enters after the leader's tail clears
 * the right edge and does not reach the left edge before the leader
 * leaves.  Both bounds are solved in closed form per lane.
 */
export class LaneAllocator {
  laneCount: number;
  canvasWidth: number;
  traverseMs: number;
  private last: (LastScroll | null)[];

  constructor(laneCount: number, canvasWidth: number, traverseMs: number) {
    if (laneCount < 1) throw new Error(`laneCount must be >= 1, got ${laneCount}`);
    this.laneCount = laneCount;
    this.canvasWidth = canvasWidth;
    this.traverseMs = traverseMs;
    this.last = new Array(laneCount).fill(null);
  }

  reset(): void {
    this.last.fill(null);
  }

  /** Earliest time the lane can accept an item of the given width. */
  private earliestFor(lane: number, enterMs: number, widthPx: number): number {
    const prev = this.last[lane];
    if (prev === null) return enterMs;
    const followerSpeed = scrollSpeed(this.canvasWidth, widthPx, this.traverseMs);
    const tailClear = prev.enterMs + prev.widthPx / prev.speed;
    const noCatch = prev.enterMs + this.traverseMs - this.canvasWidth / followerSpeed;
    return Math.max(enterMs, tailClear, noCatch);
  }

  place(enterMs: number, widthPx: number): LaneSlot {
    let bestLane = 0;
    let bestTime = Infinity;
    for (let lane = 0; lane < this.laneCount; lane++) {
      const t = this.earliestFor(lane, enterMs, widthPx);
      if (t < bestTime) {
        bestTime = t;
        bestLane = lane;
      }
      if (t <= enterMs) break; // immediate fit; lowest lane wins
    }
    this.last[bestLane] = {
      enterMs: bestTime,
      widthPx,
      speed: scrollSpeed(this.canvasWidth, widthPx, this.traverseMs),
    };
    return { lane: bestLane, enterMs: bestTime, exitMs: bestTime + this.traverseMs };
  }
}

/** Lanes for top/bottom pinned danmaku, which hold still for a fixed time. */
export class PinnedLanes {
  laneCount: number;
  holdMs: number;
  private lastExit: number[];

  constructor(laneCount: number, holdMs: number) {
    if (laneCount < 1) throw new Error(`laneCount must be >= 1, got ${laneCount}`);
    this.laneCount = laneCount;
    this.holdMs = holdMs;
    this.lastExit = new Array(laneCount).fill(-Infinity);
  }

  reset(): void {
    this.lastExit.fill(-Infinity);
  }

  place(enterMs: number): LaneSlot {
    let bestLane = 0;
    let bestTime = Infinity;
    for (let lane = 0; lane < this.laneCount; lane++) {
      const t = Math.max(enterMs, this.lastExit[lane]);
      if (t < bestTime) {
        bestTime = t;
        bestLane = lane;
      }
      if (t <= enterMs) break;
    }
    this.lastExit[bestLane] = bestTime + this.holdMs;
    return { lane: bestLane, enterMs: bestTime, exitMs: bestTime + this.holdMs };
  }
}
