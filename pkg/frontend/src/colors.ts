/** One stable palette: channel k keeps its color across every panel. */

const CHANNEL_PALETTE = ["#2e7d32", "#1565c0", "#ef6c00", "#8e24aa", "#c62828"];
const STATE_PALETTE = ["#d32f2f", "#512da8", "#00796b", "#5d4037", "#0288d1", "#afb42b"];

export const AGGREGATE_COLOR = "#37474f";

export function channelColor(index: number): string {
  return CHANNEL_PALETTE[index % CHANNEL_PALETTE.length];
}

export function stateVarColor(index: number): string {
  return STATE_PALETTE[index % STATE_PALETTE.length];
}

export function scopeColor(scope: number | "aggregate"): string {
  return scope === "aggregate" ? AGGREGATE_COLOR : channelColor(scope);
}
