/**
 * Typed client for the datadesk HTTP/JSON service.
 *
 * Every method maps one-to-one onto a service endpoint; the UI never
 * derives numbers itself, it only displays fields from these payloads.
 */

export interface ApiError {
  code: string;
  message: string;
  status: number;
}

export class ApiFailure extends Error {
  constructor(public readonly error: ApiError) {
    super(`${error.code}: ${error.message}`);
  }
}

export interface ColumnInfo {
  name: string;
  dtype: "integer" | "real" | "boolean" | "date" | "text";
  n_missing: number;
  n_distinct: number;
}

export interface SchemaPayload {
  n_rows: number;
  columns: ColumnInfo[];
}

export interface DatasetRecord {
  id: string;
  name: string;
  created_at: string;
  byte_size: number;
  schema: SchemaPayload;
}

export interface RowsPayload {
  name: string;
  columns: { name: string; dtype: string }[];
  rows: (string | number | boolean | null)[][];
  offset: number;
  total_rows: number;
}

export interface SummaryPayload {
  n: number;
  n_missing: number;
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
  mean: number;
  sd: number | null;
}

export interface FrequencyPayload {
  entries: { level: string; count: number }[];
}

export interface HistogramPayload {
  kind?: "histogram";
  edges: number[];
  counts: number[];
  n_used: number;
}

export interface XYPayload {
  kind: "scatter" | "line";
  points: [number | string, number][];
}

export interface SeriesPlotPayload {
  times: string[];
  values: number[];
  reference_line: number | null;
}

export interface SeriesPayload {
  series: {
    values: number[];
    start_year: number;
    start_period: number;
    frequency: number;
    n: number;
    times: string[];
  };
  levels_plot: SeriesPlotPayload;
}

export interface LjungBoxPayload {
  n: number;
  fitdf: number;
  lags: number[];
  rho: number[];
  q: number[];
  df: number[];
  p: (number | null)[];
}

export interface NdiffsPayload {
  ndiffs: number;
  kpss: {
    statistic: number;
    lag_truncation: number;
    critical_values: Record<string, number>;
    reject_at_5pct: boolean;
  };
}

export interface ModelPayload {
  spec: Record<string, number | boolean>;
  order: string;
  ar: number[];
  ma: number[];
  sar: number[];
  sma: number[];
  mean: number | null;
  sigma2: number;
  loglik: number;
  aic: number;
  aicc: number;
  bic: number;
  n_obs: number;
  residuals?: number[];
}

export interface ForecastPayload {
  horizon: number;
  point: number[];
  intervals: Record<string, { lower: number[]; upper: number[] }>;
  times: string[];
  model: ModelPayload;
}

export type TimeSpec =
  | { date_col: string }
  | { year_col: string; period_col?: string; frequency?: number }
  | { start_year: number; start_period?: number; frequency: number };

export interface SeriesSpec {
  value_col: string;
  time: TimeSpec;
}

export type Predicate =
  | { column: string; op: string; value?: unknown }
  | { and: Predicate[] }
  | { or: Predicate[] }
  | { not: Predicate };

export interface AggregationBody {
  group_by: string[];
  measures: { column: string; fn: string }[];
}

/** fetch-compatible function, injectable for tests. */
export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<Response>;

async function unwrap<T>(resp: Response): Promise<T> {
  const body = await resp.json().catch(() => null);
  if (!resp.ok) {
    const err = body?.error ?? {
      code: "http_error",
      message: `HTTP ${resp.status}`,
    };
    throw new ApiFailure({ ...err, status: resp.status });
  }
  return body as T;
}

export class DatadeskClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private get<T>(path: string): Promise<T> {
    return this.fetchFn(this.baseUrl + path).then((r) => unwrap<T>(r));
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => unwrap<T>(r));
  }

  healthz(): Promise<{ status: string }> {
    return this.get("/healthz");
  }

  upload(file: Blob, name: string): Promise<DatasetRecord> {
    const form = new FormData();
    form.append("file", file, name);
    form.append("name", name);
    return this.fetchFn(this.baseUrl + "/api/datasets", {
      method: "POST",
      body: form,
    }).then((r) => unwrap<DatasetRecord>(r));
  }

  listDatasets(): Promise<DatasetRecord[]> {
    return this.get("/api/datasets");
  }

  schema(id: string): Promise<SchemaPayload> {
    return this.get(`/api/datasets/${id}/schema`);
  }

  rows(id: string, offset = 0, limit = 100): Promise<RowsPayload> {
    return this.get(
      `/api/datasets/${id}/rows?offset=${offset}&limit=${limit}`,
    );
  }

  filter(id: string, predicate: Predicate): Promise<RowsPayload> {
    return this.post(`/api/datasets/${id}/filter`, { predicate });
  }

  select(id: string, columns: string[]): Promise<RowsPayload> {
    return this.post(`/api/datasets/${id}/select`, { columns });
  }

  aggregate(id: string, body: AggregationBody): Promise<RowsPayload> {
    return this.post(`/api/datasets/${id}/aggregate`, body);
  }

  summary(id: string, column: string): Promise<SummaryPayload> {
    return this.post(`/api/datasets/${id}/summary`, { column });
  }

  valueCounts(id: string, column: string): Promise<FrequencyPayload> {
    return this.post(`/api/datasets/${id}/value_counts`, { column });
  }

  histogram(
    id: string,
    column: string,
    bins?: number,
  ): Promise<HistogramPayload> {
    return this.post(`/api/datasets/${id}/chart`, {
      kind: "histogram",
      columns: [column],
      ...(bins === undefined ? {} : { bins }),
    });
  }

  xyChart(
    id: string,
    kind: "scatter" | "line",
    x: string,
    y: string,
  ): Promise<XYPayload> {
    return this.post(`/api/datasets/${id}/chart`, {
      kind,
      columns: [x, y],
    });
  }

  series(id: string, series: SeriesSpec): Promise<SeriesPayload> {
    return this.post(`/api/datasets/${id}/series`, { series });
  }

  ljungBox(
    id: string,
    series: SeriesSpec,
    maxLag?: number,
  ): Promise<LjungBoxPayload> {
    return this.post(`/api/datasets/${id}/ljung_box`, {
      series,
      ...(maxLag === undefined ? {} : { max_lag: maxLag }),
    });
  }

  ndiffs(id: string, series: SeriesSpec): Promise<NdiffsPayload> {
    return this.post(`/api/datasets/${id}/ndiffs`, { series });
  }

  diff(
    id: string,
    series: SeriesSpec,
    lag = 1,
    order = 1,
  ): Promise<SeriesPlotPayload> {
    return this.post(`/api/datasets/${id}/diff`, { series, lag, order });
  }

  fit(id: string, series: SeriesSpec, spec?: string): Promise<ModelPayload> {
    return this.post(`/api/datasets/${id}/fit`, {
      series,
      ...(spec === undefined ? {} : { spec }),
    });
  }

  forecast(
    id: string,
    series: SeriesSpec,
    horizon: number,
    spec?: string,
  ): Promise<ForecastPayload> {
    return this.post(`/api/datasets/${id}/forecast`, {
      series,
      horizon,
      ...(spec === undefined ? {} : { spec }),
    });
  }
}
