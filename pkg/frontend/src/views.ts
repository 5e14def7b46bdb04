/**
 * HTML fragments for each tab, as pure payload→string functions.
 *
 * Every number interpolated here comes verbatim from an API payload
 * field (the integration tests assert this), so the views are thin and
 * honest: no client-side statistics.
 */

import type {
  ApiError,
  DatasetRecord,
  FrequencyPayload,
  LjungBoxPayload,
  ModelPayload,
  NdiffsPayload,
  RowsPayload,
  SchemaPayload,
  SummaryPayload,
} from "./api.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function num(v: number | null): string {
  if (v === null) return "—";
  if (Number.isInteger(v)) return String(v);
  return String(Number(v.toPrecision(8)));
}

export function renderError(error: ApiError): string {
  return (
    `<div class="error" role="alert" data-code="${esc(error.code)}">` +
    `${esc(error.message)}</div>`
  );
}

export function renderSchemaSidebar(schema: SchemaPayload): string {
  const rows = schema.columns
    .map(
      (c) =>
        `<tr><td>${esc(c.name)}</td><td>${c.dtype}</td>` +
        `<td>${c.n_missing}</td><td>${c.n_distinct}</td></tr>`,
    )
    .join("");
  return (
    `<aside class="schema"><h3>Schema</h3>` +
    `<p><span data-field="n_rows">${schema.n_rows}</span> rows</p>` +
    `<table><thead><tr><th>column</th><th>type</th><th>missing</th>` +
    `<th>distinct</th></tr></thead><tbody>${rows}</tbody></table></aside>`
  );
}

export function renderRowsTable(payload: RowsPayload): string {
  const head = payload.columns
    .map((c) => `<th>${esc(c.name)}</th>`)
    .join("");
  const body = payload.rows
    .map(
      (row) =>
        "<tr>" +
        row
          .map((cell) =>
            cell === null
              ? `<td class="missing">NA</td>`
              : `<td>${esc(String(cell))}</td>`,
          )
          .join("") +
        "</tr>",
    )
    .join("");
  const shown = payload.rows.length;
  return (
    `<div class="rows-table">` +
    `<p>showing ${shown} of <span data-field="total_rows">` +
    `${payload.total_rows}</span> rows (offset ${payload.offset})</p>` +
    `<table><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>` +
    `</div>`
  );
}

export function renderSummaryCard(
  column: string,
  s: SummaryPayload,
): string {
  const entries: [string, string][] = [
    ["n", num(s.n)],
    ["missing", num(s.n_missing)],
    ["min", num(s.min)],
    ["q1", num(s.q1)],
    ["median", num(s.median)],
    ["q3", num(s.q3)],
    ["max", num(s.max)],
    ["mean", num(s.mean)],
    ["sd", num(s.sd)],
  ];
  const rows = entries
    .map(
      ([k, v]) =>
        `<tr><th>${k}</th><td data-field="${k}">${v}</td></tr>`,
    )
    .join("");
  return (
    `<div class="summary-card"><h3>${esc(column)}</h3>` +
    `<table>${rows}</table></div>`
  );
}

export function renderFrequencyTable(f: FrequencyPayload): string {
  const rows = f.entries
    .map(
      (e) =>
        `<tr><td>${esc(e.level)}</td>` +
        `<td data-count="${esc(e.level)}">${e.count}</td></tr>`,
    )
    .join("");
  return (
    `<table class="freq"><thead><tr><th>level</th><th>count</th></tr>` +
    `</thead><tbody>${rows}</tbody></table>`
  );
}

export function renderModelCard(m: ModelPayload): string {
  const coef = (label: string, values: number[]): string =>
    values.length
      ? `<tr><th>${label}</th><td>${values.map(num).join(", ")}</td></tr>`
      : "";
  return (
    `<div class="model-card"><h3>Model <span data-field="order">` +
    `${esc(m.order)}</span></h3><table>` +
    coef("ar", m.ar) +
    coef("ma", m.ma) +
    coef("sar", m.sar) +
    coef("sma", m.sma) +
    (m.mean !== null
      ? `<tr><th>mean</th><td data-field="mean">${num(m.mean)}</td></tr>`
      : "") +
    `<tr><th>sigma²</th><td data-field="sigma2">${num(m.sigma2)}</td></tr>` +
    `<tr><th>AICc</th><td data-field="aicc">${num(m.aicc)}</td></tr>` +
    `<tr><th>BIC</th><td data-field="bic">${num(m.bic)}</td></tr>` +
    `<tr><th>log-likelihood</th><td data-field="loglik">${num(m.loglik)}` +
    `</td></tr></table></div>`
  );
}

export function renderNdiffsCard(payload: NdiffsPayload): string {
  return (
    `<div class="ndiffs-card">` +
    `<p>differences suggested: <strong data-field="ndiffs">` +
    `${payload.ndiffs}</strong></p>` +
    `<p>stationarity statistic <span data-field="kpss_statistic">` +
    `${num(payload.kpss.statistic)}</span> ` +
    `(truncation ${payload.kpss.lag_truncation}; ` +
    `${payload.kpss.reject_at_5pct ? "rejects" : "does not reject"} ` +
    `at 5%)</p></div>`
  );
}

export function renderLjungBoxTable(payload: LjungBoxPayload): string {
  const rows = payload.lags
    .map(
      (lag, i) =>
        `<tr><td>${lag}</td><td data-q="${lag}">${num(payload.q[i])}</td>` +
        `<td data-p="${lag}">${
          payload.p[i] === null ? "—" : num(payload.p[i])
        }</td></tr>`,
    )
    .join("");
  return (
    `<table class="ljungbox"><thead><tr><th>lag</th><th>Q</th><th>p</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderForecastTable(payload: {
  times: string[];
  point: number[];
  intervals: Record<string, { lower: number[]; upper: number[] }>;
}): string {
  const levels = Object.keys(payload.intervals).sort();
  const head =
    `<tr><th>period</th><th>point</th>` +
    levels.map((l) => `<th>lo ${l}</th><th>hi ${l}</th>`).join("") +
    `</tr>`;
  const rows = payload.point
    .map((p, i) => {
      const cells = levels
        .map(
          (l) =>
            `<td data-lower="${l}:${i}">${num(
              payload.intervals[l].lower[i],
            )}</td>` +
            `<td data-upper="${l}:${i}">${num(
              payload.intervals[l].upper[i],
            )}</td>`,
        )
        .join("");
      return (
        `<tr><td>${esc(payload.times[i] ?? String(i + 1))}</td>` +
        `<td data-point="${i}">${num(p)}</td>${cells}</tr>`
      );
    })
    .join("");
  return (
    `<table class="forecast"><thead>${head}</thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

export function renderDatasetList(records: DatasetRecord[]): string {
  if (!records.length) return `<p>No datasets uploaded yet.</p>`;
  const rows = records
    .map(
      (r) =>
        `<tr data-id="${esc(r.id)}"><td>${esc(r.name)}</td>` +
        `<td>${r.schema.n_rows}</td><td>${r.byte_size}</td>` +
        `<td>${esc(r.created_at)}</td></tr>`,
    )
    .join("");
  return (
    `<table class="datasets"><thead><tr><th>name</th><th>rows</th>` +
    `<th>bytes</th><th>uploaded</th></tr></thead><tbody>${rows}</tbody>` +
    `</table>`
  );
}

export function renderContactPage(): string {
  return (
    `<div class="contact"><h2>About</h2>` +
    `<p>This workbench is the browser client of the datadesk analysis ` +
    `service. All statistics are computed server-side; the client only ` +
    `renders API payloads.</p>` +
    `<ul>` +
    `<li>Source and issue tracker: see the repository README.</li>` +
    `<li>API reference: the service endpoint table in the README.</li>` +
    `</ul></div>`
  );
}
