"""Batch sweeps and side-by-side layout comparisons.

Emits one row per (family, N) with egress, mortality, neighbor-count, and
critical-gamma columns; absent metrics are written as "NA", never
zero-filled.  Output is deterministic for a fixed spec and master seed.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass

from .egress import MortalityParams, analytic_expected, expected_egress, mortality_mean
from .layout import Layout, build_checkerboard, build_linear
from .propagation import (
    FireParams,
    central_ignition,
    estimate_critical_gamma,
    receptive_neighbors,
)
from .rng import fold_seed, substream

logger = logging.getLogger(__name__)

CSV_HEADER = "family,N,L,expected_egress,analytic_expected,mortality_mean,gamma_c,neighbors_r"

SWEEP_METRICS = ("egress", "mortality", "neighbors", "gamma_c")
SWEEP_FAMILIES = ("checkerboard", "linear")


class ExperimentError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    family: str
    n_values: tuple[int, ...]
    metrics: tuple[str, ...] = ("egress",)
    fire: FireParams | None = None
    mortality: MortalityParams | None = None
    master_seed: int = 0
    gamma_tolerance: float = 0.02
    gamma_replicates: int = 200

    def __post_init__(self):
        if self.family not in SWEEP_FAMILIES:
            raise ExperimentError(
                f"family must be one of {SWEEP_FAMILIES}, got {self.family!r}"
            )
        if not self.n_values:
            raise ExperimentError("n_values must be non-empty")
        if list(self.n_values) != sorted(set(self.n_values)):
            raise ExperimentError("n_values must be strictly ascending")
        if any(n < 1 for n in self.n_values):
            raise ExperimentError("n_values must be positive")
        unknown = set(self.metrics) - set(SWEEP_METRICS)
        if unknown:
            raise ExperimentError(f"unknown metrics: {sorted(unknown)}")
        if ("gamma_c" in self.metrics or "neighbors" in self.metrics) and self.fire is None:
            raise ExperimentError("gamma_c/neighbors metrics need fire params")
        if "mortality" in self.metrics and self.mortality is None:
            raise ExperimentError("mortality metric needs mortality params")


@dataclass
class SweepRow:
    family: str
    n: int
    side: int | None = None
    expected_egress: float | None = None
    analytic_expected: float | None = None
    mortality_mean: float | None = None
    gamma_c: float | None = None
    neighbors_r: int | None = None
    note: str = ""

    def as_dict(self) -> dict:
        d = {
            "family": self.family,
            "N": self.n,
            "L": self.side,
            "expected_egress": self.expected_egress,
            "analytic_expected": self.analytic_expected,
            "mortality_mean": self.mortality_mean,
            "gamma_c": self.gamma_c,
            "neighbors_r": self.neighbors_r,
        }
        if self.note:
            d["note"] = self.note
        return d


def _checkerboard_side(n: int) -> int | None:
    """Even side 2*sqrt(N) when N is a perfect square, else None."""
    k = math.isqrt(n)
    return 2 * k if k * k == n else None


def _build_for(family: str, n: int) -> tuple[Layout | None, int | None, str]:
    if family == "linear":
        return build_linear(n), None, ""
    side = _checkerboard_side(n)
    if side is None:
        return None, None, f"N={n} is not a perfect square; no even-side embedding"
    return build_checkerboard(side), side, ""


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """One row per N in spec order; inadmissible N yields a warning row."""
    key0 = fold_seed(spec.master_seed)
    rows = []
    for idx, n in enumerate(spec.n_values):
        layout, side, note = _build_for(spec.family, n)
        row = SweepRow(family=spec.family, n=n, side=side, note=note)
        if layout is None:
            logger.warning("sweep: skipping %s N=%d: %s", spec.family, n, note)
            rows.append(row)
            continue
        if "egress" in spec.metrics:
            row.expected_egress = expected_egress(layout).mean
            row.analytic_expected = (
                1.0 if spec.family == "linear" else analytic_expected(side, "exact")
            )
        if "mortality" in spec.metrics:
            row.mortality_mean = mortality_mean(layout, spec.mortality)
        if "neighbors" in spec.metrics:
            row.neighbors_r = receptive_neighbors(
                layout, central_ignition(layout), spec.fire.r
            )
        if "gamma_c" in spec.metrics:
            est = estimate_critical_gamma(
                layout,
                spec.fire,
                central_ignition(layout),
                spec.gamma_tolerance,
                spec.gamma_replicates,
                master_seed=substream(key0, idx),
            )
            row.gamma_c = est.gamma_c  # None if no crossing
        rows.append(row)
    return rows


def _cell(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def sweep_csv(rows: list[SweepRow]) -> str:
    """CSV artifact: fixed header, NA nulls, floats at 6 significant digits."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for row in rows:
        writer.writerow(
            [
                row.family,
                row.n,
                _cell(row.side),
                _cell(row.expected_egress),
                _cell(row.analytic_expected),
                _cell(row.mortality_mean),
                _cell(row.gamma_c),
                _cell(row.neighbors_r),
            ]
        )
    return out.getvalue()


def sweep_json(rows: list[SweepRow]) -> list[dict]:
    return [row.as_dict() for row in rows]


@dataclass
class ComparisonRecord:
    """Side-by-side checkerboard (nearest square N) vs linear strip."""

    n_checkerboard: int
    n_linear: int
    side: int
    egress_checkerboard: float
    egress_linear: float
    distance_ratio: float
    analytic_ratio: float
    mortality_checkerboard: float
    mortality_linear: float
    mortality_ratio: float
    gamma_c_checkerboard: float | None = None
    gamma_c_linear: float | None = None
    gamma_ratio: float | None = None

    def as_dict(self) -> dict:
        return {
            "n_checkerboard": self.n_checkerboard,
            "n_linear": self.n_linear,
            "L": self.side,
            "egress_checkerboard": self.egress_checkerboard,
            "egress_linear": self.egress_linear,
            "distance_ratio": self.distance_ratio,
            "analytic_ratio": self.analytic_ratio,
            "mortality_checkerboard": self.mortality_checkerboard,
            "mortality_linear": self.mortality_linear,
            "mortality_ratio": self.mortality_ratio,
            "gamma_c_checkerboard": self.gamma_c_checkerboard,
            "gamma_c_linear": self.gamma_c_linear,
            "gamma_ratio": self.gamma_ratio,
        }


def nearest_square(n: int) -> int:
    """Perfect square closest to n (ties resolve downward)."""
    if n < 1:
        raise ExperimentError(f"block count must be >= 1, got {n}")
    k = math.isqrt(n)
    lo, hi = k * k, (k + 1) * (k + 1)
    return lo if n - lo <= hi - n else hi


def compare_layouts(
    n_checkerboard: int,
    n_linear: int,
    mortality: MortalityParams = MortalityParams(),
    fire: FireParams | None = None,
    master_seed: int = 0,
    gamma_tolerance: float = 0.02,
    gamma_replicates: int = 200,
) -> ComparisonRecord:
    """Reproduce the two-layout comparison at the nearest admissible N.

    The checkerboard block count is rounded to the nearest perfect square
    so an even-side grid exists; the analytic ratio sqrt(N)/3 is evaluated
    at that N.  Critical-gamma columns are filled only when fire params are
    given (they dominate the runtime).
    """
    n_adm = nearest_square(n_checkerboard)
    if n_adm != n_checkerboard:
        logger.warning(
            "compare: checkerboard N=%d rounded to nearest square %d",
            n_checkerboard,
            n_adm,
        )
    side = 2 * math.isqrt(n_adm)
    checker = build_checkerboard(side)
    linear = build_linear(n_linear)

    e_c = expected_egress(checker).mean
    e_l = expected_egress(linear).mean
    m_c = mortality_mean(checker, mortality)
    m_l = mortality_mean(linear, mortality)

    record = ComparisonRecord(
        n_checkerboard=n_adm,
        n_linear=n_linear,
        side=side,
        egress_checkerboard=e_c,
        egress_linear=e_l,
        distance_ratio=e_c / e_l,
        analytic_ratio=math.sqrt(n_adm) / 3.0,
        mortality_checkerboard=m_c,
        mortality_linear=m_l,
        mortality_ratio=m_c / m_l,
    )
    if fire is not None:
        key0 = fold_seed(master_seed)
        est_c = estimate_critical_gamma(
            checker, fire, central_ignition(checker),
            gamma_tolerance, gamma_replicates, master_seed=substream(key0, 0),
        )
        est_l = estimate_critical_gamma(
            linear, fire, central_ignition(linear),
            gamma_tolerance, gamma_replicates, master_seed=substream(key0, 1),
        )
        record.gamma_c_checkerboard = est_c.gamma_c
        record.gamma_c_linear = est_l.gamma_c
        if est_c.crossed and est_l.crossed:
            record.gamma_ratio = est_l.gamma_c / est_c.gamma_c
    return record
