import { describe, expect, it } from "vitest";

import type { DatasetRecord } from "../src/api.js";
import {
  RequestGate,
  TAB_ORDER,
  clampHorizon,
  datasetLoaded,
  horizonBounds,
  horizonChanged,
  initialAdvancedState,
  initialState,
  isTabEnabled,
  requestFailed,
  requestStarted,
  selectTab,
  seriesChosen,
} from "../src/state.js";

const record: DatasetRecord = {
  id: "abc123",
  name: "cities",
  created_at: "2026-01-01T00:00:00Z",
  byte_size: 100,
  schema: { n_rows: 5, columns: [] },
};

describe("tab gating", () => {
  it("orders tabs Load → Manage → Summary → Graphs → Advanced → Contact", () => {
    expect(TAB_ORDER).toEqual([
      "load",
      "manage",
      "summary",
      "graphs",
      "advanced",
      "contact",
    ]);
  });

  it("disables dataset tabs until a dataset is loaded", () => {
    const s = initialState();
    expect(isTabEnabled(s, "load")).toBe(true);
    expect(isTabEnabled(s, "contact")).toBe(true);
    for (const tab of ["manage", "summary", "graphs", "advanced"] as const) {
      expect(isTabEnabled(s, tab)).toBe(false);
    }
  });

  it("ignores selection of a gated tab", () => {
    const s = initialState();
    expect(selectTab(s, "advanced")).toBe(s);
    expect(selectTab(s, "contact").activeTab).toBe("contact");
  });

  it("enables every tab after a dataset loads", () => {
    const s = datasetLoaded(initialState(), record);
    expect(s.activeTab).toBe("manage");
    for (const tab of TAB_ORDER) {
      expect(isTabEnabled(s, tab)).toBe(true);
    }
    expect(selectTab(s, "advanced").activeTab).toBe("advanced");
  });

  it("tracks pending/error flags", () => {
    let s = requestStarted(initialState());
    expect(s.pendingRequest).toBe(true);
    s = requestFailed(s, {
      code: "unknown_column",
      message: "no such column",
      status: 422,
    });
    expect(s.pendingRequest).toBe(false);
    expect(s.lastError?.code).toBe("unknown_column");
    // selecting a tab clears the stale error
    expect(selectTab(s, "load").lastError).toBeNull();
  });
});

describe("horizon slider", () => {
  it("bounds follow the series frequency", () => {
    expect(horizonBounds(1)).toEqual({ min: 1, max: 5 });
    expect(horizonBounds(4)).toEqual({ min: 1, max: 20 });
    expect(horizonBounds(12)).toEqual({ min: 1, max: 60 });
  });

  it("clamps out-of-range values", () => {
    expect(clampHorizon(12, 0)).toBe(1);
    expect(clampHorizon(12, 61)).toBe(60);
    expect(clampHorizon(4, 7.6)).toBe(8);
  });

  it("re-clamps when the series frequency changes", () => {
    let panel = initialAdvancedState();
    panel = seriesChosen(
      panel,
      { value_col: "v", time: { date_col: "d" } },
      12,
    );
    panel = horizonChanged(panel, 48);
    expect(panel.horizon).toBe(48);
    // switch to an annual series: 48 is no longer representable
    panel = seriesChosen(
      panel,
      { value_col: "v", time: { start_year: 1, frequency: 1 } },
      1,
    );
    expect(panel.horizon).toBe(5);
  });
});

describe("request supersession", () => {
  it("keeps only the newest ticket current", () => {
    const gate = new RequestGate();
    const first = gate.issue();
    const second = gate.issue();
    expect(gate.isCurrent(first)).toBe(false);
    expect(gate.isCurrent(second)).toBe(true);
    const third = gate.issue();
    expect(gate.isCurrent(second)).toBe(false);
    expect(gate.isCurrent(third)).toBe(true);
  });
});
