/** DOM shell: wires events to the pure state transitions and re-renders.
 *
 * All rendering flows through renderDashboard(data, state); network fetches
 * are sequenced so a stale response never overwrites a newer one.
 */
import { ApiClient } from "./api.js";
import {
  debounce,
  hover,
  initialState,
  pan,
  PanelState,
  RequestSequencer,
  select,
  setThresholds,
  setWindow,
  toggleDominanceMode,
  zoom,
} from "./state.js";
import { DashboardData } from "./types.js";
import { renderDashboard } from "./view.js";

const POLL_INTERVAL_MS = 1000;
const SLIDER_DEBOUNCE_MS = 150;

export class Dashboard {
  private data: DashboardData;
  private state: PanelState;
  private seq = new RequestSequencer();
  private banner: string | null = null;

  constructor(private root: HTMLElement, private api: ApiClient) {
    this.data = { meta: null as never, trace: null, dines: null, dominance: null, counterfactual: null };
    this.state = initialState(0, 0.3, 0.1);
  }

  async start(): Promise<void> {
    this.data.meta = await this.api.meta();
    this.state = initialState(this.data.meta.trace_length,
                              this.data.meta.thresholds.rho,
                              this.data.meta.thresholds.phi);
    await this.refreshWindow();
    this.render();
    setInterval(() => void this.poll(), POLL_INTERVAL_MS);
  }

  private async guard<T>(resource: string, fetch: () => Promise<T>, apply: (v: T) => void): Promise<void> {
    const seq = this.seq.issue();
    try {
      const value = await fetch();
      if (this.seq.shouldApply(resource, seq)) {
        apply(value);
        this.banner = null;
      }
    } catch (err) {
      this.banner = `API unreachable: ${String(err)} (showing stale data)`;
    }
  }

  private async refreshWindow(): Promise<void> {
    const { windowFrom, windowTo, rho, phi } = this.state;
    await Promise.all([
      this.guard("trace", () => this.api.trace(windowFrom, windowTo), (v) => (this.data.trace = v)),
      this.guard("dines", () => this.api.dines(rho, phi, windowFrom, windowTo), (v) => (this.data.dines = v)),
    ]);
  }

  private async refreshSelection(): Promise<void> {
    const t = this.state.selected;
    if (t === null) {
      this.data.dominance = null;
      this.data.counterfactual = null;
      return;
    }
    await Promise.all([
      this.guard("dominance", () => this.api.dominance(t), (v) => (this.data.dominance = v)),
      this.guard("counterfactual", () => this.api.counterfactual(t, this.state.rho),
                 (v) => (this.data.counterfactual = v)),
    ]);
  }

  private async poll(): Promise<void> {
    await this.guard("meta", () => this.api.meta(), (meta) => {
      const grew = meta.trace_length > this.data.meta.trace_length;
      this.data.meta = meta;
      if (grew && this.state.windowTo >= this.data.meta.trace_length - POLL_FOLLOW_SLACK) {
        const width = this.state.windowTo - this.state.windowFrom;
        this.state = setWindow(this.state, meta.trace_length - 1 - width,
                               meta.trace_length - 1, meta.trace_length);
      }
    });
    await this.refreshWindow();
    this.render();
  }

  private timestepAt(clientX: number, element: Element): number | null {
    const section = element.closest(".time-panels") as HTMLElement | null;
    const svg = element.closest("svg");
    if (!section || !svg) return null;
    const rect = svg.getBoundingClientRect();
    const x0 = Number(section.dataset.x0);
    const x1 = Number(section.dataset.x1);
    const from = Number(section.dataset.from);
    const to = Number(section.dataset.to);
    const frac = (clientX - rect.left - x0) / (x1 - x0);
    if (frac < 0 || frac > 1) return null;
    return Math.round(from + frac * (to - from));
  }

  private wireEvents(): void {
    const section = this.root.querySelector(".time-panels");
    section?.addEventListener("mousemove", (ev) => {
      const t = this.timestepAt((ev as MouseEvent).clientX, ev.target as Element);
      if (t !== this.state.hovered) {
        this.state = hover(this.state, t);
        this.render();
      }
    });
    section?.addEventListener("mouseleave", () => {
      this.state = hover(this.state, null);
      this.render();
    });
    section?.addEventListener("click", (ev) => {
      const t = this.timestepAt((ev as MouseEvent).clientX, ev.target as Element);
      if (t !== null) {
        this.state = select(this.state, t);
        void this.refreshSelection().then(() => this.render());
      }
    });

    const applyThresholds = debounce((rho: number, phi: number) => {
      this.state = setThresholds(this.state, rho, phi);
      void this.guard("dines",
        () => this.api.dines(this.state.rho, this.state.phi, this.state.windowFrom, this.state.windowTo),
        (v) => (this.data.dines = v),
      ).then(() => this.render());
    }, SLIDER_DEBOUNCE_MS);
    const readSliders = () => {
      const rho = Number((this.root.querySelector("#rho-slider") as HTMLInputElement).value);
      const phi = Number((this.root.querySelector("#phi-slider") as HTMLInputElement).value);
      applyThresholds(rho, phi);
    };
    this.root.querySelector("#rho-slider")?.addEventListener("input", readSliders);
    this.root.querySelector("#phi-slider")?.addEventListener("input", readSliders);

    this.root.querySelector("#mode-toggle")?.addEventListener("click", () => {
      this.state = toggleDominanceMode(this.state);
      this.render();
    });
    const len = () => this.data.meta.trace_length;
    const width = () => this.state.windowTo - this.state.windowFrom;
    const navigate = (next: PanelState) => {
      this.state = next;
      void this.refreshWindow().then(() => this.render());
    };
    this.root.querySelector("#pan-left")?.addEventListener("click",
      () => navigate(pan(this.state, -Math.max(1, Math.round(width() / 4)), len())));
    this.root.querySelector("#pan-right")?.addEventListener("click",
      () => navigate(pan(this.state, Math.max(1, Math.round(width() / 4)), len())));
    this.root.querySelector("#zoom-in")?.addEventListener("click",
      () => navigate(zoom(this.state, 0.5, this.state.windowFrom + width() / 2, len())));
    this.root.querySelector("#zoom-out")?.addEventListener("click",
      () => navigate(zoom(this.state, 2.0, this.state.windowFrom + width() / 2, len())));
  }

  render(): void {
    const bannerHtml = this.banner
      ? `<div class="banner">${this.banner}</div>`
      : "";
    this.root.innerHTML = bannerHtml + renderDashboard(this.data, this.state);
    this.wireEvents();
  }
}

const POLL_FOLLOW_SLACK = 2;

export async function mount(rootId = "app", baseUrl = ""): Promise<Dashboard> {
  const root = document.getElementById(rootId);
  if (!root) throw new Error(`no element #${rootId}`);
  const dashboard = new Dashboard(root, new ApiClient(baseUrl));
  await dashboard.start();
  return dashboard;
}
