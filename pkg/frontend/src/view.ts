/** Compose the five panels, sliders and counterfactual text into one view.
 * Pure: same data + state always yields the same markup.
 */
import {
  DEFAULT_LAYOUT,
  renderActionPanel,
  renderDominancePanel,
  renderRewardPanel,
  renderStatePanel,
  renderUncertainPanel,
} from "./panels.js";
import { escapeXml } from "./scale.js";
import { PanelState } from "./state.js";
import { DashboardData } from "./types.js";

export function renderDashboard(data: DashboardData, state: PanelState): string {
  const { meta } = data;
  const counterfactual = data.counterfactual?.text
    ? `<pre class="counterfactual-text">${escapeXml(data.counterfactual.text)}</pre>`
    : `<p class="counterfactual-empty">no contrastive explanation at the selected step</p>`;
  const uncertainCount = data.dines?.counts.uncertain ?? 0;
  const extremaCount = data.dines?.counts.extrema ?? 0;
  return `
<div class="dashboard">
  <header>
    <span class="window-label">window ${state.windowFrom}&#8211;${state.windowTo} of ${meta.trace_length}</span>
    <span class="dine-counts">uncertain: ${uncertainCount} &#183; extrema: ${extremaCount}</span>
    <label>&#961; <input id="rho-slider" type="range" min="0" max="1" step="0.05" value="${state.rho}"/>
      <span id="rho-value">${state.rho.toFixed(2)}</span></label>
    <label>&#966; <input id="phi-slider" type="range" min="0" max="0.5" step="0.02" value="${state.phi}"/>
      <span id="phi-value">${state.phi.toFixed(2)}</span></label>
    <button id="mode-toggle">${state.dominanceMode === "relative" ? "show absolute" : "show relative"}</button>
    <span class="nav">
      <button id="pan-left">&#8592;</button>
      <button id="zoom-in">+</button>
      <button id="zoom-out">&#8722;</button>
      <button id="pan-right">&#8594;</button>
    </span>
  </header>
  <section class="time-panels" data-from="${state.windowFrom}" data-to="${state.windowTo}"
           data-x0="${DEFAULT_LAYOUT.margin.left}" data-x1="${DEFAULT_LAYOUT.width - DEFAULT_LAYOUT.margin.right}">
    ${renderStatePanel(data.trace, state)}
    ${renderRewardPanel(data.trace, data.dines, meta, state)}
    ${renderActionPanel(data.trace, meta, state)}
    ${renderUncertainPanel(data.dines, meta, state)}
  </section>
  <section class="detail">
    ${renderDominancePanel(data.dominance, meta, state)}
    <div class="counterfactual">${counterfactual}</div>
  </section>
</div>`;
}
