"""Fetch the two classic benchmark datasets into data/.

The benchmark harness and the real-data acceptance tests look for:

* ``data/city.csv``    -- German city-size dataset (83 cities, 9 binary
  cues, criterion column ``population``).  Originally distributed with
  Gigerenzer & Goldstein's "fast and frugal heuristics" work; a machine-
  readable copy ships with the R package ``heuristica``
  (https://cran.r-project.org/package=heuristica, dataset
  ``city_population``).
* ``data/mileage.csv`` -- car fuel-economy dataset (criterion column
  ``mpg``), derived from the UCI Auto MPG data
  (https://archive.ics.uci.edu/dataset/9/auto+mpg).

This script downloads both, renames the criterion columns to the names
above, drops non-numeric identifier columns, and writes plain CSVs that
``pttb.datasets.load_item_table`` can read.  When the network is
unavailable it prints the URLs so the files can be placed manually; the
test suite skips the real-data checks while the files are absent and runs
on the bundled synthetic stand-ins instead.
"""

from __future__ import annotations

import csv
import io
import sys
import urllib.error
import urllib.request
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

CITY_URL = ("https://raw.githubusercontent.com/cran/heuristica/master/"
            "data-raw/city_population.csv")
MPG_URL = ("https://archive.ics.uci.edu/ml/machine-learning-databases/"
           "auto-mpg/auto-mpg.data")


def _download(url: str) -> str:
    with urllib.request.urlopen(url, timeout=30) as resp:
        return resp.read().decode("utf-8", errors="replace")


def fetch_city() -> None:
    text = _download(CITY_URL)
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    # keep the population criterion plus the nine binary cue columns;
    # drop rank and name identifiers.
    drop = {"Rank", "City", "Name"}
    keep = [i for i, h in enumerate(header) if h not in drop]
    out_header = ["population" if header[i].lower().startswith("population")
                  else header[i] for i in keep]
    rows = [[row[i] for i in keep] for row in reader if row]
    _write(DATA_DIR / "city.csv", out_header, rows)


def fetch_mileage() -> None:
    text = _download(MPG_URL)
    # whitespace-delimited with a trailing quoted car name; '?' marks
    # missing horsepower values (load_item_table drops those rows).
    header = ["mpg", "cylinders", "displacement", "horsepower", "weight",
              "acceleration", "model_year", "origin"]
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        fields = line.split("\t")[0].split()
        if len(fields) >= len(header):
            rows.append(fields[: len(header)])
    _write(DATA_DIR / "mileage.csv", header, rows)


def _write(path: Path, header: list[str], rows: list[list[str]]) -> None:
    path.parent.mkdir(exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def main() -> int:
    failures = 0
    for name, fetch, url in (("city", fetch_city, CITY_URL),
                             ("mileage", fetch_mileage, MPG_URL)):
        try:
            fetch()
        except (urllib.error.URLError, OSError, TimeoutError) as exc:
            failures += 1
            print(f"could not fetch {name} dataset: {exc}\n"
                  f"  download manually from {url} and place the converted "
                  f"CSV under {DATA_DIR}/", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
