"""Verification reports: JSON summary plus a CSV table of cases.

CSV columns (fixed): ``suite, case, resolution, inputs, lhs, rhs, ratio``.
``inputs`` is a compact JSON object describing the case; ``lhs`` and
``rhs`` are the measured left and right sides and ``ratio = lhs / rhs``.
"""

from __future__ import annotations

import csv
import json
import math
import platform
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, _kernels

CSV_COLUMNS = ("suite", "case", "resolution", "inputs", "lhs", "rhs", "ratio")


def _plain(x):
    """Convert numpy scalars and tuples to JSON-ready values; non-finite floats to strings."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    return x


@dataclass
class VerificationReport:
    """Outcome of one suite run.

    ``rows`` are dicts with keys ``case``, ``resolution``, ``inputs``,
    ``lhs``, ``rhs`` and ``ratio``. ``summary`` holds ``max_ratio``,
    ``constants`` and ``stability``; ``checks`` maps each tolerance test to
    its boolean outcome and ``passed`` is their conjunction.
    """

    suite: str
    config: dict
    rows: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)
    stability: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def add_row(self, case, resolution, inputs, lhs, rhs):
        ratio = lhs / rhs if rhs != 0 else (0.0 if lhs == 0 else math.inf)
        self.rows.append(
            {"case": case, "resolution": resolution, "inputs": inputs, "lhs": lhs, "rhs": rhs, "ratio": ratio}
        )
        return ratio

    def check(self, name, ok):
        self.checks[name] = bool(ok)
        return bool(ok)

    @property
    def max_ratio(self):
        ratios = [r["ratio"] for r in self.rows]
        return max(ratios) if ratios else 0.0

    @property
    def rows_finite(self):
        return all(math.isfinite(r["ratio"]) for r in self.rows)

    @property
    def passed(self):
        return self.rows_finite and all(self.checks.values())

    def to_dict(self, timestamp=True):
        env = {
            "grid": {k: self.config.get(k) for k in ("n", "N", "L")},
            "tolerances": self.tolerances,
            "version": __version__,
            "backend": _kernels.BACKEND,
            "python": platform.python_version(),
            "numpy": np.__version__,
        }
        if timestamp:
            env["timestamp"] = datetime.now(timezone.utc).isoformat()
        return _plain(
            {
                "suite": self.suite,
                "config": self.config,
                "rows": self.rows,
                "summary": {
                    "max_ratio": self.max_ratio,
                    "constants": self.constants,
                    "stability": self.stability,
                    "checks": self.checks,
                },
                "pass": self.passed,
                "environment": env,
            }
        )

    def to_json(self, timestamp=True):
        return json.dumps(self.to_dict(timestamp), indent=2, sort_keys=True) + "\n"

    def write(self, out_dir):
        """Write ``<suite>.json`` and ``<suite>.csv`` into ``out_dir``."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        json_path = out / f"{self.suite}.json"
        json_path.write_text(self.to_json())
        csv_path = out / f"{self.suite}.csv"
        with csv_path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for r in self.rows:
                inputs = json.dumps(_plain(r["inputs"]), sort_keys=True, separators=(",", ":"))
                w.writerow([self.suite, r["case"], r["resolution"], inputs] + [repr(float(r[k])) for k in ("lhs", "rhs", "ratio")])
        return json_path, csv_path


def strip_timestamp(report_dict):
    """Copy of a report dict without the environment timestamp."""
    out = json.loads(json.dumps(report_dict))
    out.get("environment", {}).pop("timestamp", None)
    return out
