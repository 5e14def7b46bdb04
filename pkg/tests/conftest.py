import datetime
import random

import pytest

from datadesk.table import Column, Table

DTYPES = ("integer", "real", "boolean", "text", "date")


def random_cell(rng: random.Random, dtype: str):
    if dtype == "integer":
        return rng.randint(-1000, 1000)
    if dtype == "real":
        # Mix of magnitudes; repr round-trips exactly through CSV.
        return rng.choice([rng.uniform(-1e3, 1e3), rng.uniform(-1, 1),
                           float(rng.randint(-50, 50))])
    if dtype == "boolean":
        return rng.random() < 0.5
    if dtype == "date":
        return datetime.date(2000, 1, 1) + datetime.timedelta(
            days=rng.randint(0, 5000))
    # Text that cannot be mistaken for another dtype or an NA token.
    return rng.choice(["apple", "pear", "he,llo", 'qu"ote', "x y",
                       "left", "right", "ñ", "line\nbreak"])


def random_table(rng: random.Random, max_rows: int = 50, max_cols: int = 8,
                 missing_rate: float = 0.1) -> Table:
    n_rows = rng.randint(1, max_rows)
    n_cols = rng.randint(1, max_cols)
    columns = []
    for j in range(n_cols):
        dtype = rng.choice(DTYPES)
        cells = []
        for _ in range(n_rows):
            if rng.random() < missing_rate:
                cells.append(None)
            else:
                cells.append(random_cell(rng, dtype))
        # dtype must be recoverable from CSV: ensure one non-missing cell
        if all(c is None for c in cells):
            cells[rng.randrange(n_rows)] = random_cell(rng, dtype)
        columns.append(Column(f"c{j}", dtype, tuple(cells)))
    return Table(name="random", columns=tuple(columns))


@pytest.fixture
def rng():
    return random.Random(20240817)
