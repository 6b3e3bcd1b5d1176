"""Site-plan compliance: the egress-bound rule and the fold-spacing rule.

The egress rule applies to plans at or above a block-count threshold and
bounds the measured mean egress distance.  The fold-spacing rule flags
pairs of blocks that are within ballistic spark range (Chebyshev block
distance <= dispersal radius) yet far apart — or disconnected — along the
block adjacency graph: exactly the folded-strip geometry where fire can
jump between passes that the walking layout keeps apart.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .egress import expected_egress
from .layout import Layout


class ComplianceError(ValueError):
    pass


@dataclass(frozen=True)
class RuleConfig:
    n_threshold: int = 50
    egress_bound: float = 2.0
    dispersal_radius: int = 3
    strip_path_factor: int = 2

    def __post_init__(self):
        for name in ("n_threshold", "egress_bound", "dispersal_radius", "strip_path_factor"):
            if getattr(self, name) < 1:
                raise ComplianceError(f"{name} must be >= 1, got {getattr(self, name)}")


@dataclass
class ComplianceReport:
    applicable: bool
    n_blocks: int
    measured_expected_egress: float
    egress_pass: bool
    fold_exposure_pairs: int
    fold_pass: bool
    overall_pass: bool

    def as_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "n_blocks": self.n_blocks,
            "measured_expected_egress": self.measured_expected_egress,
            "egress_pass": self.egress_pass,
            "fold_exposure_pairs": self.fold_exposure_pairs,
            "fold_pass": self.fold_pass,
            "overall_pass": self.overall_pass,
        }


def check_egress_rule(layout: Layout, cfg: RuleConfig) -> tuple[bool, bool, float]:
    """(applicable, egress_pass, measured mean); measured always reported."""
    measured = expected_egress(layout).mean
    applicable = layout.n_blocks >= cfg.n_threshold
    return applicable, measured <= cfg.egress_bound, measured


def check_fold_spacing(layout: Layout, cfg: RuleConfig) -> tuple[int, bool]:
    """Count pairs within spark range but strip-far; pass iff none.

    Blocks at Chebyshev block distance <= 1 are graph-adjacent (strip
    order); a violating pair has block distance <= dispersal_radius but
    graph distance > strip_path_factor * dispersal_radius.  Pairs in
    different components count as infinitely far apart.
    """
    lat = layout.block_positions() // 2
    n = len(lat)
    if n < 2:
        return 0, True

    # pairwise Chebyshev distances on the block lattice
    dr = np.abs(lat[:, 0][:, None] - lat[:, 0][None, :])
    dc = np.abs(lat[:, 1][:, None] - lat[:, 1][None, :])
    cheb = np.maximum(dr, dc)

    adjacency = [np.flatnonzero((cheb[i] <= 1) & (np.arange(n) != i)) for i in range(n)]
    cap = cfg.strip_path_factor * cfg.dispersal_radius

    violations = 0
    for i in range(n):
        in_range = (cheb[i] <= cfg.dispersal_radius) & (np.arange(n) > i)
        if not in_range.any():
            continue
        # BFS from i, truncated at depth cap: anything in range but not
        # reached within cap steps is a violating partner.
        depth = np.full(n, -1, dtype=np.int64)
        depth[i] = 0
        queue = deque([i])
        while queue:
            u = queue.popleft()
            if depth[u] == cap:
                continue
            for v in adjacency[u]:
                if depth[v] < 0:
                    depth[v] = depth[u] + 1
                    queue.append(v)
        violations += int((in_range & (depth < 0)).sum())
    return violations, violations == 0


def compliance_report(layout: Layout, cfg: RuleConfig = RuleConfig()) -> ComplianceReport:
    """Evaluate both rules; overall passes when inapplicable or both pass."""
    applicable, egress_pass, measured = check_egress_rule(layout, cfg)
    fold_pairs, fold_pass = check_fold_spacing(layout, cfg)
    return ComplianceReport(
        applicable=applicable,
        n_blocks=layout.n_blocks,
        measured_expected_egress=measured,
        egress_pass=egress_pass,
        fold_exposure_pairs=fold_pairs,
        fold_pass=fold_pass,
        overall_pass=(not applicable) or (egress_pass and fold_pass),
    )
