"""Regenerate the vendored CSVs in data/ from statsmodels' bundled copies.

Run once per checkout if the data files are missing:

    python3 tools/fetch_datasets.py

The harness itself never downloads anything; it only reads these files.
"""

import os

import statsmodels.api as sm

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, os.pardir, "data")


def write_sunspots() -> None:
    df = sm.datasets.sunspots.load_pandas().data
    path = os.path.join(DATA, "sunspots_yearly.csv")
    with open(path, "w") as fh:
        fh.write("year,activity\n")
        for year, activity in zip(df["YEAR"], df["SUNACTIVITY"]):
            fh.write(f"{int(year)},{float(activity)!r}\n")
    print(f"wrote {len(df)} rows to {path}")


def write_co2() -> None:
    df = sm.datasets.co2.load_pandas().data
    path = os.path.join(DATA, "mauna_loa_co2_weekly.csv")
    n_missing = 0
    with open(path, "w") as fh:
        fh.write("date,co2\n")
        for date, value in zip(df.index, df["co2"]):
            if value != value:  # NaN: leave the cell blank
                fh.write(f"{date.date().isoformat()},\n")
                n_missing += 1
            else:
                fh.write(f"{date.date().isoformat()},{float(value)!r}\n")
    print(f"wrote {len(df)} rows ({n_missing} blank) to {path}")


if __name__ == "__main__":
    os.makedirs(DATA, exist_ok=True)
    write_sunspots()
    write_co2()
