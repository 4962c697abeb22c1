/** The five dashboard panels, each a pure function from data to an SVG string.
 *
 * Shared conventions: the x axis is the timestep; every time panel draws a
 * hover rule and a selection rule at the linked timesteps; markers carry
 * data-t attributes so the shell can hit-test them.
 */
import { channelColor, scopeColor, stateVarColor } from "./colors.js";
import { escapeXml, extent, linearScale, linePath, round2, Scale, stepPath, ticks } from "./scale.js";
import { DinesPayload, DominancePayload, Meta, TraceWindow } from "./types.js";
import { PanelState } from "./state.js";

export interface Layout {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
}

export const DEFAULT_LAYOUT: Layout = {
  width: 960,
  height: 150,
  margin: { top: 18, right: 12, bottom: 20, left: 48 },
};

function plotArea(layout: Layout) {
  const { width, height, margin } = layout;
  return {
    x0: margin.left,
    x1: width - margin.right,
    y0: margin.top,
    y1: height - margin.bottom,
  };
}

function timeScale(state: PanelState, layout: Layout): Scale {
  const a = plotArea(layout);
  return linearScale([state.windowFrom, state.windowTo], [a.x0, a.x1]);
}

function svgOpen(layout: Layout, title: string, panelClass: string): string {
  return (
    `<svg class="panel ${panelClass}" viewBox="0 0 ${layout.width} ${layout.height}" ` +
    `width="${layout.width}" height="${layout.height}" xmlns="http://www.w3.org/2000/svg">` +
    `<text class="panel-title" x="4" y="12">${escapeXml(title)}</text>`
  );
}

function linkedRules(state: PanelState, scale: Scale, layout: Layout): string {
  const a = plotArea(layout);
  let out = "";
  if (state.selected !== null) {
    const x = round2(scale(state.selected));
    out += `<line class="select-rule" data-t="${state.selected}" x1="${x}" y1="${a.y0}" x2="${x}" y2="${a.y1}" stroke="#f9a825" stroke-width="2"/>`;
  }
  if (state.hovered !== null) {
    const x = round2(scale(state.hovered));
    out += `<line class="hover-rule" data-t="${state.hovered}" x1="${x}" y1="${a.y0}" x2="${x}" y2="${a.y1}" stroke="#616161" stroke-dasharray="3,2"/>`;
  }
  return out;
}

function xAxis(scale: Scale, layout: Layout): string {
  const a = plotArea(layout);
  const parts = [`<line x1="${a.x0}" y1="${a.y1}" x2="${a.x1}" y2="${a.y1}" stroke="#9e9e9e"/>`];
  for (const t of ticks(scale.domain, 8)) {
    const x = round2(scale(t));
    parts.push(`<text class="tick" x="${x}" y="${a.y1 + 14}" text-anchor="middle">${t}</text>`);
  }
  return parts.join("");
}

function yAxis(scale: Scale, layout: Layout, count = 4): string {
  const a = plotArea(layout);
  const parts: string[] = [];
  for (const v of ticks(scale.domain, count)) {
    const y = round2(scale(v));
    parts.push(
      `<line x1="${a.x0}" y1="${y}" x2="${a.x1}" y2="${y}" stroke="#eeeeee"/>`,
      `<text class="tick" x="${a.x0 - 4}" y="${y + 3}" text-anchor="end">${v}</text>`,
    );
  }
  return parts.join("");
}

/** Panel 1: z-score standardized state variables as one line per variable. */
export function renderStatePanel(trace: TraceWindow | null, state: PanelState,
                                 layout: Layout = DEFAULT_LAYOUT): string {
  let body = "";
  const x = timeScale(state, layout);
  if (trace && trace.timesteps.length > 0) {
    const a = plotArea(layout);
    const all = trace.state.standardized.flat();
    const y = linearScale(extent(all), [a.y1, a.y0]);
    body += yAxis(y, layout);
    trace.state.standardized.forEach((series, i) => {
      const path = linePath(trace.timesteps.map((t) => x(t)), series.map((v) => y(v)));
      body += `<path class="state-line" data-var="${escapeXml(trace.state.names[i])}" d="${path}" fill="none" stroke="${stateVarColor(i)}" stroke-width="1.4"/>`;
    });
    trace.state.names.forEach((name, i) => {
      body += `<text class="legend" x="${a.x0 + 8 + i * 120}" y="${a.y0 - 4}" fill="${stateVarColor(i)}">${escapeXml(name)}</text>`;
    });
  }
  return svgOpen(layout, "State progression (z-scores)", "panel-state")
    + body + xAxis(x, layout) + linkedRules(state, x, layout) + "</svg>";
}

/** Panel 2: per-channel reward curves plus extremum markers from /api/dines. */
export function renderRewardPanel(trace: TraceWindow | null, dines: DinesPayload | null,
                                  meta: Meta, state: PanelState,
                                  layout: Layout = DEFAULT_LAYOUT): string {
  let body = "";
  const x = timeScale(state, layout);
  if (trace && trace.timesteps.length > 0) {
    const a = plotArea(layout);
    const y = linearScale(extent(trace.rewards.flat()), [a.y1, a.y0]);
    body += yAxis(y, layout);
    trace.rewards.forEach((series, c) => {
      const path = linePath(trace.timesteps.map((t) => x(t)), series.map((v) => y(v)));
      body += `<path class="reward-line" data-channel="${c}" d="${path}" fill="none" stroke="${channelColor(c)}" stroke-width="1.4"/>`;
    });
    meta.channel_names.forEach((name, c) => {
      body += `<text class="legend" x="${a.x0 + 8 + c * 150}" y="${a.y0 - 4}" fill="${channelColor(c)}">${escapeXml(name)}</text>`;
    });
    if (dines) {
      for (const d of dines.extrema) {
        const cx = round2(x(d.timestep));
        const cy = d.extremum === "maximum" ? a.y0 + 8 : a.y1 - 8;
        const shape = d.extremum === "maximum"
          ? `${cx},${cy - 5} ${cx - 5},${cy + 4} ${cx + 5},${cy + 4}`
          : `${cx},${cy + 5} ${cx - 5},${cy - 4} ${cx + 5},${cy - 4}`;
        body += `<polygon class="extremum-marker" data-t="${d.timestep}" data-scope="${d.scope}" data-kind="${d.extremum}" points="${shape}" fill="${scopeColor(d.scope)}"/>`;
      }
    }
  }
  return svgOpen(layout, "Rewards per channel + extremum DINEs", "panel-rewards")
    + body + xAxis(x, layout) + linkedRules(state, x, layout) + "</svg>";
}

/** Panel 3: trajectory of the actions the aggregated agent chose. */
export function renderActionPanel(trace: TraceWindow | null, meta: Meta, state: PanelState,
                                  layout: Layout = DEFAULT_LAYOUT): string {
  let body = "";
  const x = timeScale(state, layout);
  const a = plotArea(layout);
  const y = linearScale([0, Math.max(1, meta.n_actions - 1)], [a.y1 - 6, a.y0 + 6]);
  meta.action_names.forEach((name, i) => {
    body += `<text class="tick action-label" x="${a.x0 - 4}" y="${round2(y(i) + 3)}" text-anchor="end">${escapeXml(name)}</text>`;
  });
  if (trace && trace.timesteps.length > 0) {
    const path = stepPath(trace.timesteps.map((t) => x(t)), trace.actions.map((v) => y(v)));
    body += `<path class="action-line" d="${path}" fill="none" stroke="#455a64" stroke-width="1.4"/>`;
    trace.timesteps.forEach((t, i) => {
      if (trace.exploratory[i]) {
        body += `<circle class="exploratory-dot" data-t="${t}" cx="${round2(x(t))}" cy="${round2(y(trace.actions[i]))}" r="2.5" fill="#e53935"/>`;
      }
    });
  }
  return svgOpen(layout, "Selected actions", "panel-actions")
    + body + xAxis(x, layout) + linkedRules(state, x, layout) + "</svg>";
}

/** Panel 4: uncertain-action DINEs; one stacked cell per contrastive channel. */
export function renderUncertainPanel(dines: DinesPayload | null, meta: Meta, state: PanelState,
                                     layout: Layout = DEFAULT_LAYOUT): string {
  let body = "";
  const x = timeScale(state, layout);
  const a = plotArea(layout);
  if (dines) {
    const rowH = Math.min(18, (a.y1 - a.y0 - 4) / Math.max(1, meta.n_channels));
    for (const d of dines.uncertain) {
      const cx = x(d.timestep);
      d.contrastive.forEach((entry, i) => {
        const cy = a.y1 - (i + 1) * rowH;
        body +=
          `<rect class="uncertain-marker" data-t="${d.timestep}" data-channel="${entry.channel}" ` +
          `data-preferred="${entry.preferred_action}" x="${round2(cx - 2.5)}" y="${round2(cy)}" ` +
          `width="5" height="${round2(rowH - 1)}" fill="${channelColor(entry.channel)}"/>`;
      });
    }
  }
  return svgOpen(layout, "Uncertain actions (stack = disagreeing channels)", "panel-uncertain")
    + body + xAxis(x, layout) + linkedRules(state, x, layout) + "</svg>";
}

const DOMINANCE_LAYOUT: Layout = {
  width: 460,
  height: 240,
  margin: { top: 24, right: 12, bottom: 34, left: 48 },
};

/** Panel 5: reward-channel dominance for the selected timestep as a stacked
 * column chart, one column per action; relative by default, absolute on
 * toggle (negative segments stack downward from zero). */
export function renderDominancePanel(dominance: DominancePayload | null, meta: Meta,
                                     state: PanelState,
                                     layout: Layout = DOMINANCE_LAYOUT): string {
  const a = plotArea(layout);
  const mode = state.dominanceMode;
  const hoverNote = state.hovered !== null
    ? `<text class="hover-note" data-t="${state.hovered}" x="${layout.width - 8}" y="12" text-anchor="end">hover t=${state.hovered}</text>`
    : "";
  let body = "";
  if (dominance) {
    const values = mode === "relative" ? dominance.relative : dominance.absolute;
    const totalsUp = values[0].map((_, aIdx) =>
      values.reduce((acc, row) => acc + Math.max(0, row[aIdx]), 0));
    const totalsDown = values[0].map((_, aIdx) =>
      values.reduce((acc, row) => acc + Math.min(0, row[aIdx]), 0));
    const y = linearScale([Math.min(0, ...totalsDown), Math.max(1e-9, ...totalsUp)], [a.y1, a.y0]);
    const zero = round2(y(0));
    body += yAxis(y, layout, 4);
    const slot = (a.x1 - a.x0) / meta.n_actions;
    const barW = slot * 0.6;
    for (let aIdx = 0; aIdx < meta.n_actions; aIdx++) {
      const cx = a.x0 + slot * (aIdx + 0.5);
      let up = 0;
      let down = 0;
      for (let c = 0; c < values.length; c++) {
        const v = values[c][aIdx];
        if (v === 0) continue;
        let y0: number;
        let y1: number;
        if (v > 0) {
          y0 = y(up + v);
          y1 = y(up);
          up += v;
        } else {
          y0 = y(down);
          y1 = y(down + v);
          down += v;
        }
        body +=
          `<rect class="dominance-segment" data-action="${aIdx}" data-channel="${c}" ` +
          `x="${round2(cx - barW / 2)}" y="${round2(Math.min(y0, y1))}" width="${round2(barW)}" ` +
          `height="${round2(Math.abs(y1 - y0))}" fill="${channelColor(c)}"/>`;
      }
      const label = meta.action_names[aIdx] ?? String(aIdx);
      const marker = aIdx === dominance.chosen_action ? " chosen" : "";
      body += `<text class="tick action-name${marker}" x="${round2(cx)}" y="${a.y1 + 14}" text-anchor="middle">${escapeXml(label)}</text>`;
      if (aIdx === dominance.chosen_action) {
        body += `<text class="chosen-mark" x="${round2(cx)}" y="${a.y1 + 26}" text-anchor="middle">&#9650; chosen</text>`;
      }
    }
    body += `<line x1="${a.x0}" y1="${zero}" x2="${a.x1}" y2="${zero}" stroke="#9e9e9e"/>`;
  } else {
    body += `<text class="placeholder" x="${(a.x0 + a.x1) / 2}" y="${(a.y0 + a.y1) / 2}" text-anchor="middle">select a timestep</text>`;
  }
  const title = dominance
    ? `Reward channel dominance @ t=${dominance.timestep} (${mode})`
    : `Reward channel dominance (${mode})`;
  return svgOpen(layout, title, "panel-dominance") + hoverNote + body + "</svg>";
}
