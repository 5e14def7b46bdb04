/**
 * Workbench state machine: tab flow, gating, and the advanced panel.
 *
 * Pure data + transition functions so behavior is testable without a DOM.
 * Tab order is Load → Manage → Summary → Graphs → Advanced → Contact;
 * everything between Load and Contact requires an active dataset.
 */

import type { ApiError, DatasetRecord, SeriesSpec } from "./api.js";

export type Tab =
  | "load"
  | "manage"
  | "summary"
  | "graphs"
  | "advanced"
  | "contact";

export const TAB_ORDER: readonly Tab[] = [
  "load",
  "manage",
  "summary",
  "graphs",
  "advanced",
  "contact",
];

/** Tabs that only make sense once a dataset is loaded. */
const DATASET_TABS: ReadonlySet<Tab> = new Set([
  "manage",
  "summary",
  "graphs",
  "advanced",
]);

export interface WorkbenchState {
  activeDataset: DatasetRecord | null;
  activeTab: Tab;
  pendingRequest: boolean;
  lastError: ApiError | null;
}

export function initialState(): WorkbenchState {
  return {
    activeDataset: null,
    activeTab: "load",
    pendingRequest: false,
    lastError: null,
  };
}

export function isTabEnabled(state: WorkbenchState, tab: Tab): boolean {
  if (DATASET_TABS.has(tab)) return state.activeDataset !== null;
  return true;
}

/** Switch tab; ignored (state unchanged) when the tab is gated off. */
export function selectTab(state: WorkbenchState, tab: Tab): WorkbenchState {
  if (!isTabEnabled(state, tab)) return state;
  return { ...state, activeTab: tab, lastError: null };
}

export function datasetLoaded(
  state: WorkbenchState,
  record: DatasetRecord,
): WorkbenchState {
  return {
    ...state,
    activeDataset: record,
    activeTab: "manage",
    pendingRequest: false,
    lastError: null,
  };
}

export function requestStarted(state: WorkbenchState): WorkbenchState {
  return { ...state, pendingRequest: true, lastError: null };
}

export function requestFailed(
  state: WorkbenchState,
  error: ApiError,
): WorkbenchState {
  return { ...state, pendingRequest: false, lastError: error };
}

export function requestFinished(state: WorkbenchState): WorkbenchState {
  return { ...state, pendingRequest: false };
}

// --- advanced panel ---------------------------------------------------------

export interface AdvancedPanelState {
  series: SeriesSpec | null;
  frequency: number;
  horizon: number;
  modelSpec: string | null; // null = automatic order selection
}

export function initialAdvancedState(): AdvancedPanelState {
  return { series: null, frequency: 1, horizon: 1, modelSpec: null };
}

export function horizonBounds(frequency: number): { min: number; max: number } {
  return { min: 1, max: 5 * frequency };
}

export function clampHorizon(frequency: number, horizon: number): number {
  const { min, max } = horizonBounds(frequency);
  return Math.min(max, Math.max(min, Math.round(horizon)));
}

/** A new series (possibly a new frequency) re-clamps the slider. */
export function seriesChosen(
  panel: AdvancedPanelState,
  series: SeriesSpec,
  frequency: number,
): AdvancedPanelState {
  return {
    ...panel,
    series,
    frequency,
    horizon: clampHorizon(frequency, panel.horizon),
  };
}

export function horizonChanged(
  panel: AdvancedPanelState,
  horizon: number,
): AdvancedPanelState {
  return { ...panel, horizon: clampHorizon(panel.frequency, horizon) };
}

// --- request supersession ---------------------------------------------------

/**
 * At most one in-flight request per panel: later submissions supersede
 * earlier ones, whose responses must then be dropped on arrival.
 */
export class RequestGate {
  private ticket = 0;

  issue(): number {
    return ++this.ticket;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.ticket;
  }
}
