/** Panel state and its pure transition functions. */

export type DominanceMode = "relative" | "absolute";

export interface PanelState {
  windowFrom: number;
  windowTo: number;
  hovered: number | null;
  selected: number | null;
  rho: number;
  phi: number;
  dominanceMode: DominanceMode;
}

export function initialState(traceLength: number, rho: number, phi: number,
                             windowSize = 200): PanelState {
  const to = Math.max(0, traceLength - 1);
  const from = Math.max(0, to - windowSize + 1);
  return {
    windowFrom: from,
    windowTo: to,
    hovered: null,
    selected: null,
    rho,
    phi,
    dominanceMode: "relative",
  };
}

function inWindow(state: PanelState, t: number | null): boolean {
  return t !== null && t >= state.windowFrom && t <= state.windowTo;
}

export function hover(state: PanelState, t: number | null): PanelState {
  if (t !== null && !inWindow(state, t)) return state;
  return { ...state, hovered: t };
}

export function select(state: PanelState, t: number | null): PanelState {
  if (t !== null && !inWindow(state, t)) return state;
  return { ...state, selected: t };
}

export function setThresholds(state: PanelState, rho: number, phi: number): PanelState {
  return {
    ...state,
    rho: Math.min(1, Math.max(0, rho)),
    phi: Math.max(0, phi),
  };
}

export function toggleDominanceMode(state: PanelState): PanelState {
  return { ...state, dominanceMode: state.dominanceMode === "relative" ? "absolute" : "relative" };
}

/** Pan/zoom the window, clamped to the trace; selection survives only while visible. */
export function setWindow(state: PanelState, from: number, to: number,
                          traceLength: number): PanelState {
  const last = Math.max(0, traceLength - 1);
  const width = Math.max(1, Math.min(Math.round(to - from), last));
  let lo = Math.round(from);
  if (lo < 0) lo = 0;
  if (lo + width > last) lo = Math.max(0, last - width);
  const next = { ...state, windowFrom: lo, windowTo: lo + width };
  if (!inWindow(next, next.selected)) next.selected = null;
  if (!inWindow(next, next.hovered)) next.hovered = null;
  return next;
}

export function pan(state: PanelState, delta: number, traceLength: number): PanelState {
  return setWindow(state, state.windowFrom + delta, state.windowTo + delta, traceLength);
}

export function zoom(state: PanelState, factor: number, centerT: number,
                     traceLength: number): PanelState {
  const width = Math.max(4, Math.round((state.windowTo - state.windowFrom) * factor));
  const leftShare = (centerT - state.windowFrom) / (state.windowTo - state.windowFrom || 1);
  const from = Math.round(centerT - width * leftShare);
  return setWindow(state, from, from + width, traceLength);
}

/** Monotone sequence numbers so stale async responses never overwrite newer ones. */
export class RequestSequencer {
  private next = 1;
  private applied = new Map<string, number>();

  issue(): number {
    return this.next++;
  }

  shouldApply(resource: string, seq: number): boolean {
    const last = this.applied.get(resource) ?? 0;
    if (seq < last) return false;
    this.applied.set(resource, seq);
    return true;
  }
}

/** Trailing-edge debounce used by the threshold sliders (150 ms). */
export function debounce<A extends unknown[]>(fn: (...args: A) => void, waitMs = 150,
                                              timers: Pick<typeof globalThis, "setTimeout" | "clearTimeout"> = globalThis) {
  let handle: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (handle !== undefined) timers.clearTimeout(handle);
    handle = timers.setTimeout(() => fn(...args), waitMs);
  };
}
