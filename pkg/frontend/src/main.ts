/**
 * Browser entry point: wires the state machine, API client, and views
 * onto the static skeleton in index.html.
 */

import { ApiFailure, DatadeskClient } from "./api.js";
import type { SeriesSpec } from "./api.js";
import {
  renderForecastFan,
  renderHistogram,
  renderLjungBox,
  renderSeriesPlot,
  renderXY,
} from "./charts.js";
import {
  AdvancedPanelState,
  RequestGate,
  TAB_ORDER,
  Tab,
  WorkbenchState,
  datasetLoaded,
  horizonBounds,
  horizonChanged,
  initialAdvancedState,
  initialState,
  isTabEnabled,
  requestFailed,
  requestFinished,
  requestStarted,
  selectTab,
  seriesChosen,
} from "./state.js";
import {
  renderContactPage,
  renderDatasetList,
  renderError,
  renderForecastTable,
  renderLjungBoxTable,
  renderModelCard,
  renderNdiffsCard,
  renderRowsTable,
  renderSchemaSidebar,
  renderSummaryCard,
} from "./views.js";

const client = new DatadeskClient("");
let state: WorkbenchState = initialState();
let advanced: AdvancedPanelState = initialAdvancedState();
let seriesValues: number[] = [];
const forecastGate = new RequestGate();

const $ = (sel: string): HTMLElement => {
  const el = document.querySelector(sel);
  if (!el) throw new Error(`missing element ${sel}`);
  return el as HTMLElement;
};

function setState(next: WorkbenchState): void {
  state = next;
  renderTabs();
  $("#error-slot").innerHTML = state.lastError
    ? renderError(state.lastError)
    : "";
  document.body.classList.toggle("busy", state.pendingRequest);
}

function renderTabs(): void {
  for (const tab of TAB_ORDER) {
    const btn = $(`#tab-${tab}`) as HTMLButtonElement;
    btn.disabled = !isTabEnabled(state, tab);
    btn.classList.toggle("active", state.activeTab === tab);
    $(`#panel-${tab}`).hidden = state.activeTab !== tab;
  }
}

async function guard<T>(work: Promise<T>): Promise<T | null> {
  setState(requestStarted(state));
  try {
    const result = await work;
    setState(requestFinished(state));
    return result;
  } catch (err) {
    if (err instanceof ApiFailure) {
      setState(requestFailed(state, err.error));
      return null;
    }
    setState(
      requestFailed(state, {
        code: "network_error",
        message: String(err),
        status: 0,
      }),
    );
    return null;
  }
}

// --- load tab ---------------------------------------------------------------

async function handleUpload(): Promise<void> {
  const input = $("#file-input") as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) return;
  const record = await guard(client.upload(file, file.name));
  if (!record) return;
  setState(datasetLoaded(state, record));
  $("#schema-slot").innerHTML = renderSchemaSidebar(record.schema);
  const rows = await guard(client.rows(record.id, 0, 50));
  if (rows) $("#rows-slot").innerHTML = renderRowsTable(rows);
  void refreshDatasetList();
  populateColumnPickers();
}

async function refreshDatasetList(): Promise<void> {
  const records = await client.listDatasets().catch(() => []);
  $("#dataset-list").innerHTML = renderDatasetList(records);
}

function populateColumnPickers(): void {
  const schema = state.activeDataset?.schema;
  if (!schema) return;
  const numeric = schema.columns.filter(
    (c) => c.dtype === "integer" || c.dtype === "real",
  );
  const fill = (sel: string, names: string[]): void => {
    const el = $(sel) as HTMLSelectElement;
    el.innerHTML = names
      .map((n) => `<option value="${n}">${n}</option>`)
      .join("");
  };
  fill("#summary-column", numeric.map((c) => c.name));
  fill("#hist-column", numeric.map((c) => c.name));
  fill("#xy-x", numeric.map((c) => c.name));
  fill("#xy-y", numeric.map((c) => c.name));
  fill("#bar-column", schema.columns.map((c) => c.name));
  fill("#series-value", numeric.map((c) => c.name));
  fill(
    "#series-date",
    schema.columns.filter((c) => c.dtype === "date").map((c) => c.name),
  );
}

// --- summary / graphs -------------------------------------------------------

async function handleSummary(): Promise<void> {
  const id = state.activeDataset?.id;
  if (!id) return;
  const column = ($("#summary-column") as HTMLSelectElement).value;
  const [summary, counts] = await Promise.all([
    guard(client.summary(id, column)),
    client.valueCounts(id, column).catch(() => null),
  ]);
  if (summary) {
    $("#summary-slot").innerHTML = renderSummaryCard(column, summary);
  }
  if (counts && counts.entries.length <= 30) {
    $("#summary-chart-slot").innerHTML = "";
  }
}

async function handleHistogram(): Promise<void> {
  const id = state.activeDataset?.id;
  if (!id) return;
  const column = ($("#hist-column") as HTMLSelectElement).value;
  const data = await guard(client.histogram(id, column));
  if (data) $("#graph-slot").innerHTML = renderHistogram(data);
}

async function handleXY(kind: "scatter" | "line"): Promise<void> {
  const id = state.activeDataset?.id;
  if (!id) return;
  const x = ($("#xy-x") as HTMLSelectElement).value;
  const y = ($("#xy-y") as HTMLSelectElement).value;
  const data = await guard(client.xyChart(id, kind, x, y));
  if (data) $("#graph-slot").innerHTML = renderXY(data);
}

// --- advanced tab -----------------------------------------------------------

function currentSeriesSpec(): SeriesSpec | null {
  const value = ($("#series-value") as HTMLSelectElement).value;
  const dateCol = ($("#series-date") as HTMLSelectElement).value;
  if (!value) return null;
  if (dateCol) return { value_col: value, time: { date_col: dateCol } };
  const freq = Number(($("#series-freq") as HTMLSelectElement).value);
  return {
    value_col: value,
    time: { start_year: 1, start_period: 1, frequency: freq },
  };
}

async function handleBuildSeries(): Promise<void> {
  const id = state.activeDataset?.id;
  const spec = currentSeriesSpec();
  if (!id || !spec) return;
  const payload = await guard(client.series(id, spec));
  if (!payload) return;
  advanced = seriesChosen(advanced, spec, payload.series.frequency);
  seriesValues = payload.series.values;
  const slider = $("#horizon-slider") as HTMLInputElement;
  const bounds = horizonBounds(advanced.frequency);
  slider.min = String(bounds.min);
  slider.max = String(bounds.max);
  slider.value = String(advanced.horizon);
  $("#horizon-value").textContent = String(advanced.horizon);
  $("#levels-slot").innerHTML = renderSeriesPlot(payload.levels_plot);

  const [lb, nd, diffPlot] = await Promise.all([
    client.ljungBox(id, spec).catch(() => null),
    client.ndiffs(id, spec).catch(() => null),
    client.diff(id, spec).catch(() => null),
  ]);
  if (lb) {
    $("#ljungbox-slot").innerHTML =
      renderLjungBox(lb) + renderLjungBoxTable(lb);
  }
  if (nd) $("#ndiffs-slot").innerHTML = renderNdiffsCard(nd);
  if (diffPlot) $("#diff-slot").innerHTML = renderSeriesPlot(diffPlot);
  await refreshForecast();
}

async function refreshForecast(): Promise<void> {
  const id = state.activeDataset?.id;
  if (!id || !advanced.series) return;
  const ticket = forecastGate.issue();
  const specText = ($("#model-spec") as HTMLInputElement).value.trim();
  const payload = await guard(
    client.forecast(
      id,
      advanced.series,
      advanced.horizon,
      specText || undefined,
    ),
  );
  if (!payload || !forecastGate.isCurrent(ticket)) return;
  $("#forecast-slot").innerHTML =
    renderForecastFan(seriesValues, payload) +
    renderForecastTable(payload) +
    renderModelCard(payload.model);
}

function handleHorizonInput(): void {
  const slider = $("#horizon-slider") as HTMLInputElement;
  advanced = horizonChanged(advanced, Number(slider.value));
  slider.value = String(advanced.horizon);
  $("#horizon-value").textContent = String(advanced.horizon);
  void refreshForecast();
}

// --- wiring -----------------------------------------------------------------

export function start(): void {
  for (const tab of TAB_ORDER) {
    $(`#tab-${tab}`).addEventListener("click", () =>
      setState(selectTab(state, tab as Tab)),
    );
  }
  $("#upload-button").addEventListener("click", () => void handleUpload());
  $("#summary-run").addEventListener("click", () => void handleSummary());
  $("#hist-run").addEventListener("click", () => void handleHistogram());
  $("#scatter-run").addEventListener("click", () => void handleXY("scatter"));
  $("#line-run").addEventListener("click", () => void handleXY("line"));
  $("#series-build").addEventListener("click", () => void handleBuildSeries());
  $("#horizon-slider").addEventListener("input", handleHorizonInput);
  $("#model-refit").addEventListener("click", () => void refreshForecast());
  $("#panel-contact").innerHTML = renderContactPage();
  setState(state);
  void refreshDatasetList();
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  start();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", start);
}
