"""HTTP/JSON API over the core operations.

Every analysis endpoint is a stateless wrapper: given a dataset id it
reconstructs the table and calls the corresponding library function, so a
response body always decodes to exactly the core result.  Errors map to
``{"error": {"code", "message"}}`` with 4xx for caller faults.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Request, UploadFile, Form, File
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import charts, jsoncodec as codec, ops
from .errors import (
    BadRequestError,
    DataDeskError,
    HorizonOutOfRangeError,
    PayloadTooLargeError,
    UnknownDatasetError,
)
from .store import DEFAULT_MAX_UPLOAD_BYTES, DatasetStore
from .table import ParseOptions, Table, schema, to_csv
from .timeseries import (
    build_series,
    difference,
    fit_arima,
    auto_fit,
    forecast as run_forecast,
    kpss_test,
    ljung_box,
    ndiffs,
)

_STATUS = {
    "empty_input": 422,
    "encoding_error": 422,
    "ragged_rows": 422,
    "invalid_header": 422,
    "unknown_column": 422,
    "duplicate_selection": 422,
    "type_mismatch": 422,
    "non_numeric_column": 422,
    "all_missing": 422,
    "zero_bins": 422,
    "empty_data": 422,
    "gap_in_series": 422,
    "duplicate_timestamp": 422,
    "missing_value_in_series": 422,
    "constant_series": 422,
    "lag_out_of_range": 422,
    "series_too_short": 422,
    "invalid_spec": 422,
    "too_few_observations": 422,
    "horizon_out_of_range": 422,
    "unknown_dataset": 404,
    "payload_too_large": 413,
    "bad_request": 400,
    "non_convergence": 500,
    "internal_error": 500,
}


def _error_response(exc: DataDeskError) -> JSONResponse:
    status = _STATUS.get(exc.code, 500 if not exc.caller_fault else 422)
    return JSONResponse(
        status_code=status,
        content={"error": {"code": exc.code, "message": str(exc)}},
    )


def create_app(data_dir=None,
               max_upload_bytes: int = DEFAULT_MAX_UPLOAD_BYTES) -> FastAPI:
    """Build the service; configuration comes from arguments or environment
    (DATADESK_DATA_DIR, DATADESK_MAX_UPLOAD_BYTES)."""
    if data_dir is None:
        data_dir = os.environ.get("DATADESK_DATA_DIR", "./datadesk-data")
    env_max = os.environ.get("DATADESK_MAX_UPLOAD_BYTES")
    if env_max is not None:
        max_upload_bytes = int(env_max)

    app = FastAPI(title="datadesk", docs_url=None, redoc_url=None)
    store = DatasetStore(data_dir, max_upload_bytes=max_upload_bytes)
    app.state.store = store

    @app.exception_handler(DataDeskError)
    async def handle_datadesk_error(request: Request, exc: DataDeskError):
        return _error_response(exc)

    async def _json_body(request: Request) -> dict:
        try:
            body = await request.json()
        except Exception as exc:
            raise BadRequestError("request body is not valid JSON") from exc
        if not isinstance(body, dict):
            raise BadRequestError("request body must be a JSON object")
        return body

    def _series_from_body(table: Table, body: dict):
        if "series" not in body:
            raise BadRequestError("missing 'series' spec")
        value_col, time_spec = codec.series_spec_from_json(body["series"])
        return build_series(table, value_col, time_spec)

    # --- datasets ----------------------------------------------------------

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.post("/api/datasets", status_code=201)
    async def upload_dataset(file: UploadFile = File(...),
                             name: str = Form(None),
                             delimiter: str = Form(","),
                             has_header: bool = Form(True)):
        data = await file.read()
        options = ParseOptions(delimiter=delimiter, has_header=has_header)
        record = store.store(data, name or file.filename or "dataset",
                             options)
        return record.to_json()

    @app.get("/api/datasets")
    async def list_datasets():
        return [r.to_json() for r in store.list()]

    @app.get("/api/datasets/{dataset_id}/schema")
    async def dataset_schema(dataset_id: str):
        return codec.schema_to_json(schema(store.table(dataset_id)))

    @app.get("/api/datasets/{dataset_id}/rows")
    async def dataset_rows(dataset_id: str, offset: int = 0,
                           limit: int = 100):
        if offset < 0 or limit < 1 or limit > 1000:
            raise BadRequestError("offset must be >= 0 and limit in [1, 1000]")
        table = store.table(dataset_id)
        return codec.table_to_json(table, offset=offset, limit=limit)

    def _maybe_materialize(result: Table, body: dict, suffix: str):
        if body.get("materialize"):
            record = store.store(to_csv(result),
                                 f"{result.name}-{suffix}")
            return record.to_json()
        return codec.table_to_json(result)

    # --- exploration -------------------------------------------------------

    @app.post("/api/datasets/{dataset_id}/filter")
    async def filter_dataset(dataset_id: str, request: Request):
        body = await _json_body(request)
        table = store.table(dataset_id)
        if "predicate" not in body:
            raise BadRequestError("missing 'predicate'")
        pred = codec.predicate_from_json(body["predicate"])
        result = ops.filter_rows(table, pred)
        return _maybe_materialize(result, body, "filtered")

    @app.post("/api/datasets/{dataset_id}/select")
    async def select_dataset(dataset_id: str, request: Request):
        body = await _json_body(request)
        table = store.table(dataset_id)
        if "columns" not in body:
            raise BadRequestError("missing 'columns'")
        result = ops.select_columns(table, body["columns"])
        return _maybe_materialize(result, body, "selected")

    @app.post("/api/datasets/{dataset_id}/aggregate")
    async def aggregate_dataset(dataset_id: str, request: Request):
        body = await _json_body(request)
        table = store.table(dataset_id)
        spec = codec.aggregation_from_json(body)
        result = ops.group_aggregate(table, spec)
        return _maybe_materialize(result, body, "aggregated")

    @app.post("/api/datasets/{dataset_id}/summary")
    async def summary(dataset_id: str, request: Request):
        body = await _json_body(request)
        if "column" not in body:
            raise BadRequestError("missing 'column'")
        table = store.table(dataset_id)
        return codec.summary_to_json(
            ops.summarize_column(table, body["column"])
        )

    @app.post("/api/datasets/{dataset_id}/value_counts")
    async def counts(dataset_id: str, request: Request):
        body = await _json_body(request)
        if "column" not in body:
            raise BadRequestError("missing 'column'")
        table = store.table(dataset_id)
        return codec.frequency_to_json(ops.value_counts(table, body["column"]))

    @app.post("/api/datasets/{dataset_id}/chart")
    async def chart(dataset_id: str, request: Request):
        body = await _json_body(request)
        table = store.table(dataset_id)
        kind = body.get("kind")
        columns = body.get("columns", [])
        if kind == "histogram":
            if len(columns) != 1:
                raise BadRequestError("histogram needs exactly one column")
            data = charts.histogram(table, columns[0], body.get("bins"))
            return {"kind": "histogram", **codec.histogram_to_json(data)}
        if kind in ("scatter", "line"):
            if len(columns) != 2:
                raise BadRequestError(f"{kind} needs exactly two columns")
            data = charts.xy_series(table, columns[0], columns[1], kind)
            return codec.xy_to_json(data)
        if kind == "bar":
            if len(columns) != 1:
                raise BadRequestError("bar chart needs exactly one column")
            data = ops.value_counts(table, columns[0])
            return {"kind": "bar", **codec.frequency_to_json(data)}
        raise BadRequestError(f"unknown chart kind {kind!r}")

    # --- time series -------------------------------------------------------

    @app.post("/api/datasets/{dataset_id}/series")
    async def series(dataset_id: str, request: Request):
        body = await _json_body(request)
        table = store.table(dataset_id)
        ts = _series_from_body(table, body)
        plot = charts.SeriesPlotData(times=tuple(ts.time_labels()),
                                     values=ts.values)
        return {"series": codec.timeseries_to_json(ts),
                "levels_plot": codec.series_plot_to_json(plot)}

    @app.post("/api/datasets/{dataset_id}/ljung_box")
    async def ljung_box_endpoint(dataset_id: str, request: Request):
        body = await _json_body(request)
        table = store.table(dataset_id)
        ts = _series_from_body(table, body)
        max_lag = body.get("max_lag", min(10, len(ts.values) - 1))
        result = ljung_box(ts.values, max_lag, fitdf=body.get("fitdf", 0))
        return codec.ljung_box_to_json(result)

    @app.post("/api/datasets/{dataset_id}/ndiffs")
    async def ndiffs_endpoint(dataset_id: str, request: Request):
        body = await _json_body(request)
        table = store.table(dataset_id)
        ts = _series_from_body(table, body)
        kpss = kpss_test(ts.values)
        return {"ndiffs": ndiffs(ts.values),
                "kpss": codec.kpss_to_json(kpss)}

    @app.post("/api/datasets/{dataset_id}/diff")
    async def diff_endpoint(dataset_id: str, request: Request):
        body = await _json_body(request)
        table = store.table(dataset_id)
        ts = _series_from_body(table, body)
        lag = int(body.get("lag", 1))
        order = int(body.get("order", 1))
        diffed = difference(ts, lag, order)
        mean = sum(diffed.values) / len(diffed.values)
        plot = charts.SeriesPlotData(times=tuple(diffed.time_labels()),
                                     values=diffed.values,
                                     reference_line=mean)
        return codec.series_plot_to_json(plot)

    def _fit_from_body(table: Table, body: dict):
        ts = _series_from_body(table, body)
        if body.get("spec") is not None:
            model = fit_arima(ts, codec.arima_spec_from_json(body["spec"]))
        else:
            model = auto_fit(ts)
        return ts, model

    @app.post("/api/datasets/{dataset_id}/fit")
    async def fit_endpoint(dataset_id: str, request: Request):
        body = await _json_body(request)
        table = store.table(dataset_id)
        _, model = _fit_from_body(table, body)
        return codec.model_to_json(model)

    @app.post("/api/datasets/{dataset_id}/forecast")
    async def forecast_endpoint(dataset_id: str, request: Request):
        body = await _json_body(request)
        table = store.table(dataset_id)
        ts = _series_from_body(table, body)
        if "horizon" not in body:
            raise BadRequestError("missing 'horizon'")
        horizon = int(body["horizon"])
        if not 1 <= horizon <= 5 * ts.frequency:
            raise HorizonOutOfRangeError(
                f"horizon must be in [1, {5 * ts.frequency}]"
            )
        if body.get("spec") is not None:
            model = fit_arima(ts, codec.arima_spec_from_json(body["spec"]))
        else:
            model = auto_fit(ts)
        levels = tuple(body.get("levels", (0.80, 0.95)))
        result = run_forecast(model, horizon, levels)
        out = codec.forecast_to_json(result, ts)
        out["model"] = codec.model_to_json(model, include_residuals=False)
        return out

    static_dir = os.environ.get("DATADESK_STATIC_DIR")
    if static_dir and os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="webui")

    return app
