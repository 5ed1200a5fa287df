"""
Report analytics for the TRK toolkit.
Aggregates per-repetition metrics into mean/std tables and marks the
best and second-best model for every metric.
"""

import logging
import math
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


class Analytics:
    """Builds the aggregate table behind the Mean/Std comparison reports."""

    METRICS: Tuple[str, ...] = ("r2", "rmse", "mae")
    HIGHER_IS_BETTER = frozenset({"r2"})
    COLUMNS = ["model", "metric", "mean", "std", "is_best", "is_second", "n_ok", "n_failed", "single_run"]

    def summarize(self, values: Sequence[float]) -> Tuple[float, float]:
        """
        Mean and sample standard deviation (divisor n - 1) of finite values.

        Args:
            values: Metric values; NaN entries (undefined R2, failed fits) are skipped

        Returns:
            Tuple[float, float]: (mean, std); std is 0 for one value, both NaN for none
        """
        data = np.asarray([v for v in values if v is not None and math.isfinite(v)], dtype=float)
        if data.size == 0:
            return math.nan, math.nan
        if data.size == 1:
            return float(data[0]), 0.0
        return float(np.mean(data)), float(np.std(data, ddof=1))

    def aggregate(self, runs: pd.DataFrame, models: Sequence[str]) -> pd.DataFrame:
        """
        Aggregate a runs table into one row per (model, metric).

        Args:
            runs: Table with columns model, status and one column per metric
            models: Roster order; rows come out in this order, metrics in METRICS order

        Returns:
            pd.DataFrame: Columns model, metric, mean, std, is_best, is_second, n_ok, n_failed, single_run
        """
        rows: List[Dict] = []
        for model in models:
            subset = runs[runs["model"] == model]
            ok = subset[subset["status"] == "ok"]
            n_failed = int(len(subset) - len(ok))
            if n_failed:
                logger.warning(f"{model}: {n_failed} failed run(s) excluded from the aggregates")
            for metric in self.METRICS:
                mean, std = self.summarize(ok[metric].tolist())
                rows.append({
                    "model": model,
                    "metric": metric,
                    "mean": mean,
                    "std": std,
                    "is_best": False,
                    "is_second": False,
                    "n_ok": int(len(ok)),
                    "n_failed": n_failed,
                    "single_run": len(ok) == 1,
                })

        table = pd.DataFrame(rows, columns=self.COLUMNS)
        for metric in self.METRICS:
            self._flag_ranks(table, metric)
        return table

    def _flag_ranks(self, table: pd.DataFrame, metric: str) -> None:
        # Order by mean (direction per metric), then by smaller std; equal keys share a flag.
        sign = -1.0 if metric in self.HIGHER_IS_BETTER else 1.0
        keys = {}
        for index, row in table[table["metric"] == metric].iterrows():
            if math.isfinite(row["mean"]):
                keys[index] = (sign * row["mean"], row["std"])
        ranked = sorted(set(keys.values()))
        if not ranked:
            return
        for index, key in keys.items():
            if key == ranked[0]:
                table.at[index, "is_best"] = True
            elif len(ranked) > 1 and key == ranked[1]:
                table.at[index, "is_second"] = True


# Global analytics instance
analytics = Analytics()
