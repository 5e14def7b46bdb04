/**
 * End-to-end session against a live service: upload → summary → graph →
 * forecast. Asserts that every number the views display is the
 * corresponding API field, and that horizon changes re-fetch forecasts
 * with matching array lengths.
 */

import { spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { DatadeskClient } from "../src/api.js";
import type { DatasetRecord, SeriesSpec } from "../src/api.js";
import { renderForecastFan, renderHistogram, renderSeriesPlot } from "../src/charts.js";
import {
  clampHorizon,
  datasetLoaded,
  initialState,
  isTabEnabled,
} from "../src/state.js";
import {
  num,
  renderForecastTable,
  renderModelCard,
  renderNdiffsCard,
  renderRowsTable,
  renderSchemaSidebar,
  renderSummaryCard,
} from "../src/views.js";

const PORT = 8731 + Math.floor(Math.random() * 200);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let dataDir: string;
const client = new DatadeskClient(BASE);

function monthlyCsv(): string {
  const lines = ["month,sales"];
  let year = 2015;
  let mon = 1;
  let level = 100;
  // deterministic pseudo-random walk with a seasonal swing
  let seed = 42;
  const rand = () => {
    seed = (seed * 1103515245 + 12345) % 2147483648;
    return seed / 2147483648 - 0.5;
  };
  for (let t = 0; t < 96; t++) {
    level += 0.5 + rand();
    const value = level + 8 * Math.sin((2 * Math.PI * (mon - 1)) / 12);
    lines.push(`${year}-${String(mon).padStart(2, "0")}-01,${value}`);
    mon += 1;
    if (mon === 13) {
      year += 1;
      mon = 1;
    }
  }
  return lines.join("\n") + "\n";
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "datadesk-ui-"));
  server = spawn(
    "python3",
    [
      "-c",
      "import sys, uvicorn\n" +
        "from datadesk.service import create_app\n" +
        `uvicorn.run(create_app(data_dir=sys.argv[1]), host='127.0.0.1', ` +
        `port=${PORT}, log_level='error')`,
      dataDir,
    ],
    { stdio: ["ignore", "ignore", "inherit"] },
  );
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      const ok = await client.healthz();
      if (ok.status === "ok") break;
    } catch {
      /* not up yet */
    }
    if (Date.now() > deadline) throw new Error("service did not start");
    await new Promise((r) => setTimeout(r, 250));
  }
}, 40_000);

afterAll(() => {
  server?.kill();
  if (dataDir) rmSync(dataDir, { recursive: true, force: true });
});

describe("upload → summary → graph → forecast session", () => {
  let record: DatasetRecord;
  const series: SeriesSpec = {
    value_col: "sales",
    time: { date_col: "month" },
  };

  it("uploads a CSV and gates tabs on the result", async () => {
    const before = initialState();
    expect(isTabEnabled(before, "summary")).toBe(false);

    record = await client.upload(
      new Blob([monthlyCsv()], { type: "text/csv" }),
      "sales.csv",
    );
    expect(record.id).toHaveLength(22);
    expect(record.schema.n_rows).toBe(96);

    const after = datasetLoaded(before, record);
    expect(isTabEnabled(after, "summary")).toBe(true);
    expect(isTabEnabled(after, "advanced")).toBe(true);
  });

  it("schema sidebar and row table display the API's counts", async () => {
    const schema = await client.schema(record.id);
    const sidebar = renderSchemaSidebar(schema);
    expect(sidebar).toContain(`data-field="n_rows">${schema.n_rows}<`);

    const rows = await client.rows(record.id, 0, 10);
    const table = renderRowsTable(rows);
    expect(table).toContain(`data-field="total_rows">${rows.total_rows}<`);
    expect(rows.rows).toHaveLength(10);
    // first cell of the first row appears verbatim
    expect(table).toContain(String(rows.rows[0][0]));
  });

  it("summary card shows exactly the API statistics", async () => {
    const summary = await client.summary(record.id, "sales");
    const card = renderSummaryCard("sales", summary);
    for (const key of [
      "min",
      "q1",
      "median",
      "q3",
      "max",
      "mean",
      "sd",
    ] as const) {
      expect(card).toContain(
        `data-field="${key}">${num(summary[key])}<`,
      );
    }
    expect(summary.n).toBe(96);
  });

  it("histogram chart maps every payload bin to a bar", async () => {
    const hist = await client.histogram(record.id, "sales");
    expect(hist.edges).toHaveLength(hist.counts.length + 1);
    expect(hist.counts.reduce((a, b) => a + b, 0)).toBe(hist.n_used);
    const svg = renderHistogram(hist);
    expect((svg.match(/<rect /g) ?? []).length).toBe(1 + hist.counts.length);
  });

  it("levels and diff plots come straight from the series endpoints", async () => {
    const payload = await client.series(record.id, series);
    expect(payload.series.frequency).toBe(12);
    expect(payload.levels_plot.values).toEqual(payload.series.values);
    renderSeriesPlot(payload.levels_plot); // must not throw

    const diff = await client.diff(record.id, series, 1, 1);
    expect(diff.values).toHaveLength(95);
    const mean =
      diff.values.reduce((a, b) => a + b, 0) / diff.values.length;
    expect(diff.reference_line).not.toBeNull();
    expect(Math.abs((diff.reference_line as number) - mean)).toBeLessThan(
      1e-9,
    );
    const svg = renderSeriesPlot(diff);
    expect(svg).toContain(`data-value="${diff.reference_line}"`);

    const nd = await client.ndiffs(record.id, series);
    const cardHtml = renderNdiffsCard(nd);
    expect(cardHtml).toContain(`data-field="ndiffs">${nd.ndiffs}<`);
  });

  it("forecast views trace every number to the API payload", async () => {
    const horizon = 12;
    const fc = await client.forecast(record.id, series, horizon, "0,1,0");
    expect(fc.point).toHaveLength(horizon);
    expect(fc.times).toHaveLength(horizon);
    for (const level of ["0.8", "0.95"]) {
      expect(fc.intervals[level].lower).toHaveLength(horizon);
      expect(fc.intervals[level].upper).toHaveLength(horizon);
    }
    // band ordering at every step
    for (let i = 0; i < horizon; i++) {
      expect(fc.intervals["0.95"].lower[i]).toBeLessThanOrEqual(
        fc.intervals["0.8"].lower[i],
      );
      expect(fc.intervals["0.8"].lower[i]).toBeLessThanOrEqual(fc.point[i]);
      expect(fc.point[i]).toBeLessThanOrEqual(fc.intervals["0.8"].upper[i]);
      expect(fc.intervals["0.8"].upper[i]).toBeLessThanOrEqual(
        fc.intervals["0.95"].upper[i],
      );
    }

    const table = renderForecastTable(fc);
    for (let i = 0; i < horizon; i++) {
      expect(table).toContain(`data-point="${i}">${num(fc.point[i])}<`);
      expect(table).toContain(
        `data-upper="0.95:${i}">${num(fc.intervals["0.95"].upper[i])}<`,
      );
    }
    const modelCard = renderModelCard(fc.model);
    expect(modelCard).toContain(`data-field="order">(0,1,0)<`);
    expect(modelCard).toContain(
      `data-field="sigma2">${num(fc.model.sigma2)}<`,
    );

    const seriesPayload = await client.series(record.id, series);
    const fan = renderForecastFan(seriesPayload.series.values, fc);
    expect(fan).toContain('data-level="0.8"');
    expect(fan).toContain('data-level="0.95"');
  });

  it("slider changes re-fetch with matching array lengths", async () => {
    for (const requested of [1, 7, 60, 99]) {
      const clamped = clampHorizon(12, requested);
      expect(clamped).toBeGreaterThanOrEqual(1);
      expect(clamped).toBeLessThanOrEqual(60);
      const fc = await client.forecast(record.id, series, clamped, "0,1,1");
      expect(fc.horizon).toBe(clamped);
      expect(fc.point).toHaveLength(clamped);
      expect(fc.intervals["0.95"].lower).toHaveLength(clamped);
      expect(fc.intervals["0.95"].upper).toHaveLength(clamped);
    }
  });

  it("service rejects an unclamped horizon, and the UI surfaces the code", async () => {
    await expect(
      client.forecast(record.id, series, 61, "0,1,0"),
    ).rejects.toMatchObject({
      error: { code: "horizon_out_of_range", status: 422 },
    });
  });
});
