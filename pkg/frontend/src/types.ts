/** Payload shapes of the trace service API. */

export interface Meta {
  channel_names: string[];
  action_names: string[];
  state_var_names: string[];
  weights: number[];
  n_channels: number;
  n_actions: number;
  trace_length: number;
  thresholds: { rho: number; phi: number };
}

export interface TraceWindow {
  timesteps: number[];
  state: {
    names: string[];
    raw: number[][];          // per variable
    standardized: number[][]; // per variable
    means: number[];
    sigmas: number[];
  };
  rewards: number[][];        // per channel
  actions: number[];
  exploratory: boolean[];
  epsilon: number[];
}

export interface ContrastiveEntry {
  channel: number;
  preferred_action: number;
  normalized_gap: number;
}

export interface UncertainDine {
  kind: "uncertain";
  timestep: number;
  chosen_action: number;
  contrastive: ContrastiveEntry[];
}

export interface ExtremumDine {
  kind: "extremum";
  timestep: number;
  scope: number | "aggregate";
  extremum: "maximum" | "minimum";
  state_value: number;
  predicted_next_values: number[];
}

export interface DinesPayload {
  rho: number;
  phi: number;
  uncertain: UncertainDine[];
  extrema: ExtremumDine[];
  counts: { uncertain: number; extrema: number };
}

export interface DominancePayload {
  kind: "dominance";
  timestep: number;
  absolute: number[][];
  relative: number[][];
  chosen_action: number;
  dominant_channel: number;
}

export interface CounterfactualPayload {
  timestep: number;
  text: string;
}

/** Everything the dashboard needs to render one frame. */
export interface DashboardData {
  meta: Meta;
  trace: TraceWindow | null;
  dines: DinesPayload | null;
  dominance: DominancePayload | null;
  counterfactual: CounterfactualPayload | null;
}
