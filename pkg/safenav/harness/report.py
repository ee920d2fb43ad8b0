"""Support for writing and reading batch reports."""

import json
import sys

import pandas as pd

from .batch import BatchSummary

REPORT_FORMATS = ("csv", "json")
CSV_COLUMNS = ["strategy", "metric", "region", "mean", "std", "cost_threshold"]
STDOUT = "-"


def summary_table(summary: BatchSummary) -> pd.DataFrame:
    """One row per strategy, metric and region."""

    rows = []
    for key, strategy in summary.strategies.items():
        rows.append(
            (key, "failure_rate", "", strategy.failure_rate.mean, strategy.failure_rate.std)
        )
        rows.append(
            (
                key,
                "cumulative_collision",
                "",
                strategy.cumulative_collision.mean,
                strategy.cumulative_collision.std,
            )
        )
        for region, stat in strategy.localize_counts.items():
            rows.append((key, "localize_count", region, stat.mean, stat.std))

    table = pd.DataFrame(rows, columns=CSV_COLUMNS[:-1])
    table["cost_threshold"] = summary.cost_threshold
    return table[CSV_COLUMNS]


def emit_report(summary: BatchSummary, fmt: str, destination=STDOUT):
    """Write a summary as CSV or JSON to a path, a file object or stdout."""

    if fmt not in REPORT_FORMATS:
        raise ValueError(f"Unknown report format {fmt}; use one of {REPORT_FORMATS}")

    if fmt == "csv":
        text = summary_table(summary).to_csv(index=False)
    else:
        text = json.dumps(summary.to_dict(), indent=2) + "\n"

    if destination == STDOUT:
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8") as report_file:
            report_file.write(text)


def load_summary(path: str) -> BatchSummary:
    """Read a JSON report back into a summary."""
    with open(path, encoding="utf-8") as report_file:
        try:
            return BatchSummary.from_dict(json.load(report_file))
        except (KeyError, TypeError, ValueError) as error:
            raise ValueError(f"{path} is not a JSON batch report: {error}") from error
