"""Error hierarchy shared by the library, the HTTP service, and the CLI.

Every error carries a stable machine-readable ``code`` so the service and
CLI can map failures without string matching.
"""

from __future__ import annotations


class DataDeskError(Exception):
    """Base class for all library errors."""

    code = "internal_error"
    #: True for errors caused by the caller's input (mapped to HTTP 4xx).
    caller_fault = True


class EmptyInputError(DataDeskError):
    code = "empty_input"


class EncodingError(DataDeskError):
    code = "encoding_error"


class RaggedRowsError(DataDeskError):
    code = "ragged_rows"

    def __init__(self, row_index: int, expected: int, got: int):
        self.row_index = row_index
        self.expected = expected
        self.got = got
        super().__init__(
            f"row {row_index} has {got} fields, expected {expected}"
        )


class InvalidHeaderError(DataDeskError):
    code = "invalid_header"


class UnknownColumnError(DataDeskError):
    code = "unknown_column"

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown column: {name!r}")


class DuplicateSelectionError(DataDeskError):
    code = "duplicate_selection"


class TypeMismatchError(DataDeskError):
    code = "type_mismatch"


class NonNumericColumnError(DataDeskError):
    code = "non_numeric_column"


class AllMissingError(DataDeskError):
    code = "all_missing"


class ZeroBinsError(DataDeskError):
    code = "zero_bins"


class EmptyDataError(DataDeskError):
    code = "empty_data"


class GapInSeriesError(DataDeskError):
    code = "gap_in_series"

    def __init__(self, missing_label: str):
        self.missing_label = missing_label
        super().__init__(f"gap in series: missing {missing_label}")


class DuplicateTimestampError(DataDeskError):
    code = "duplicate_timestamp"

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"duplicate timestamp: {label}")


class MissingValueInSeriesError(DataDeskError):
    code = "missing_value_in_series"


class ConstantSeriesError(DataDeskError):
    code = "constant_series"


class LagOutOfRangeError(DataDeskError):
    code = "lag_out_of_range"


class SeriesTooShortError(DataDeskError):
    code = "series_too_short"


class InvalidSpecError(DataDeskError):
    code = "invalid_spec"


class TooFewObservationsError(DataDeskError):
    code = "too_few_observations"


class NonConvergenceError(DataDeskError):
    code = "non_convergence"
    caller_fault = False


class HorizonOutOfRangeError(DataDeskError):
    code = "horizon_out_of_range"


class UnknownDatasetError(DataDeskError):
    code = "unknown_dataset"

    def __init__(self, dataset_id: str):
        self.dataset_id = dataset_id
        super().__init__(f"unknown dataset: {dataset_id}")


class PayloadTooLargeError(DataDeskError):
    code = "payload_too_large"


class BadRequestError(DataDeskError):
    code = "bad_request"
