from __future__ import annotations

import logging
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from ..config import SearchConfig
from ..correlations import (
    BellDiagonalParams,
    bell_diagonal_classical_correlation,
    bell_diagonal_discord,
    bell_diagonal_state,
    classical_correlation,
    mutual_information,
    physical_c1_range,
)
from ..coherence import rel_ent_coherence, total_coherence
from ..errors import ConfigurationError
from ..fixtures import (
    FIGURE2_C2,
    FIGURE2_C3,
    FIGURE2_PHI,
    FIGURE2_POINT,
    FIGURE2_THETA,
    binary_entropy,
    example1_state,
    example2_classical_correlation,
    example2_extra_miac,
    example2_state,
    example3_classical_correlation,
    example3_extra,
    example3_null_measurement,
    example3_state,
)
from ..measurement import computational_measurement, qubit_projector_pair
from ..miac import (
    bell_diagonal_extra_miac,
    bell_diagonal_extra_miatc,
    extra_miac,
    extra_miatc,
)


logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["c1", "J", "D", "extra_miatc", "extra_miac"]
ORDERING_TOL = 1e-9
FORMULA_TOL = 1e-9
OPTIMIZER_TOL = 1e-4

# (example, quantity, expected, computed, tolerance)
_Row = Tuple[str, str, float, float, float]


def _example1_rows(config: SearchConfig) -> List[_Row]:
    s = example1_state()
    comp = computational_measurement(2)
    plus_minus = qubit_projector_pair(np.pi / 2, 0.0)
    return [
        ("1", "extra MIAC, computational", 1.0, extra_miac(s, comp), 1e-12),
        ("1", "extra MIATC, computational", 1.0, extra_miatc(s, comp), 1e-12),
        ("1", "J", 1.0, classical_correlation(s, config=config).classical_correlation, 1e-12),
        ("1", "I(A:B)", 1.0, mutual_information(s), 1e-12),
        ("1", "extra MIAC, +/- basis", 0.0, extra_miac(s, plus_minus), 1e-12),
        ("1", "extra MIATC, +/- basis", 0.0, extra_miatc(s, plus_minus), 1e-12),
    ]


def _example2_rows(config: SearchConfig) -> List[_Row]:
    s = example2_state()
    comp = computational_measurement(2)
    plus_minus = qubit_projector_pair(np.pi / 2, 0.0)
    j_closed = example2_classical_correlation()
    report = classical_correlation(s, config=config)
    rho_b = s.reduced("B")
    return [
        ("2", "extra MIATC, computational", j_closed, extra_miatc(s, comp), 1e-9),
        ("2", "extra MIAC, computational", example2_extra_miac(), extra_miac(s, comp), 1e-9),
        ("2", "C(rho_B)", binary_entropy(0.25) - j_closed, rel_ent_coherence(rho_b), 1e-9),
        ("2", "C^T(rho_B)", 1.0 - j_closed, total_coherence(rho_b), 1e-9),
        ("2", "J", j_closed, report.classical_correlation, 1e-6),
        ("2", "discord", 0.0, report.discord, 1e-6),
        ("2", "extra MIAC, +/- basis", 0.0, extra_miac(s, plus_minus), 1e-9),
        ("2", "extra MIATC, +/- basis", 0.0, extra_miatc(s, plus_minus), 1e-9),
    ]


def _example3_rows(config: SearchConfig) -> List[_Row]:
    s = example3_state()
    comp = computational_measurement(2)
    null = example3_null_measurement()
    return [
        ("3", "extra MIAC, computational", example3_extra(), extra_miac(s, comp), 1e-9),
        ("3", "extra MIATC, computational", example3_extra(), extra_miatc(s, comp), 1e-9),
        (
            "3",
            "J",
            example3_classical_correlation(),
            classical_correlation(s, config=config).classical_correlation,
            1e-6,
        ),
        ("3", "extra MIAC, cot 2t = cos phi", 0.0, extra_miac(s, null), 1e-9),
        ("3", "extra MIATC, cot 2t = cos phi", 0.0, extra_miatc(s, null), 1e-9),
    ]


def _example4_rows(config: SearchConfig) -> List[_Row]:
    p = FIGURE2_POINT
    s = bell_diagonal_state(p)
    report = classical_correlation(s, config=config)
    m = qubit_projector_pair(FIGURE2_THETA, FIGURE2_PHI)
    return [
        ("4", "J (closed form vs search)", bell_diagonal_classical_correlation(p), report.classical_correlation, OPTIMIZER_TOL),
        ("4", "D (closed form vs search)", bell_diagonal_discord(p), report.discord, OPTIMIZER_TOL),
        (
            "4",
            "extra MIAC at sweep angles",
            bell_diagonal_extra_miac(p, FIGURE2_THETA, FIGURE2_PHI),
            extra_miac(s, m),
            FORMULA_TOL,
        ),
        (
            "4",
            "extra MIATC at sweep angles",
            bell_diagonal_extra_miatc(p, FIGURE2_THETA, FIGURE2_PHI),
            extra_miatc(s, m),
            FORMULA_TOL,
        ),
    ]


def examples_table(config: Optional[SearchConfig] = None) -> pd.DataFrame:
    """Closed-form values of the worked examples next to the computed ones."""
    if config is None:
        config = SearchConfig()
    rows: List[_Row] = []
    for builder in (_example1_rows, _example2_rows, _example3_rows, _example4_rows):
        rows.extend(builder(config))
    df = pd.DataFrame(rows, columns=["example", "quantity", "expected", "computed", "tolerance"])
    df["gap"] = (df["computed"] - df["expected"]).abs()
    df["ok"] = df["gap"] <= df["tolerance"]
    return df[["example", "quantity", "expected", "computed", "gap", "tolerance", "ok"]]


def figure2_sweep(
    c1_min: Optional[float] = None,
    c1_max: Optional[float] = None,
    steps: int = 100,
    *,
    theta: float = FIGURE2_THETA,
    phi: float = FIGURE2_PHI,
    c2: float = FIGURE2_C2,
    c3: float = FIGURE2_C3,
) -> pd.DataFrame:
    """Closed-form J and D with measured extras along a c1 sweep of Bell-diagonal states."""
    lo, hi = physical_c1_range(c2, c3)
    c1_min = lo if c1_min is None else c1_min
    c1_max = hi if c1_max is None else c1_max
    if steps < 1:
        raise ConfigurationError(f"steps must be >= 1, got {steps}")
    if c1_min > c1_max:
        raise ConfigurationError(f"c1_min {c1_min} exceeds c1_max {c1_max}")
    if c1_min < lo - 1e-12 or c1_max > hi + 1e-12:
        raise ConfigurationError(
            f"c1 range [{c1_min}, {c1_max}] leaves the physical interval [{lo:.6g}, {hi:.6g}]"
        )
    m = qubit_projector_pair(theta, phi)
    records = []
    for c1 in np.linspace(c1_min, c1_max, steps):
        p = BellDiagonalParams(float(c1), c2, c3)
        s = bell_diagonal_state(p)
        records.append(
            {
                "c1": float(c1),
                "J": bell_diagonal_classical_correlation(p),
                "D": bell_diagonal_discord(p),
                "extra_miatc": extra_miatc(s, m),
                "extra_miac": extra_miac(s, m),
            }
        )
    logger.info("Sweep of %d Bell-diagonal states over c1 in [%g, %g]", steps, c1_min, c1_max)
    return pd.DataFrame.from_records(records, columns=SWEEP_COLUMNS)


def figure2_checks(
    sweep: pd.DataFrame,
    spot_checks: int = 10,
    *,
    theta: float = FIGURE2_THETA,
    phi: float = FIGURE2_PHI,
    c2: float = FIGURE2_C2,
    c3: float = FIGURE2_C3,
    config: Optional[SearchConfig] = None,
) -> pd.DataFrame:
    """Failed checks on a sweep as (c1, check, gap) rows; empty when all pass."""
    failures: List[Tuple[float, str, float]] = []
    for row in sweep.itertuples(index=False):
        p = BellDiagonalParams(row.c1, c2, c3)
        checks = {
            "J >= extra_miatc": row.extra_miatc - row.J - ORDERING_TOL,
            "extra_miatc >= extra_miac": row.extra_miac - row.extra_miatc - ORDERING_TOL,
            "extra_miatc formula": abs(row.extra_miatc - bell_diagonal_extra_miatc(p, theta, phi))
            - FORMULA_TOL,
            "extra_miac formula": abs(row.extra_miac - bell_diagonal_extra_miac(p, theta, phi))
            - FORMULA_TOL,
        }
        failures.extend((row.c1, name, excess) for name, excess in checks.items() if excess > 0)

    if spot_checks > 0 and len(sweep):
        picks = np.unique(np.linspace(0, len(sweep) - 1, min(spot_checks, len(sweep))).round().astype(int))
        for idx in picks:
            row = sweep.iloc[int(idx)]
            p = BellDiagonalParams(float(row["c1"]), c2, c3)
            report = classical_correlation(bell_diagonal_state(p), config=config)
            for name, expected, found in (
                ("J search", row["J"], report.classical_correlation),
                ("D search", row["D"], report.discord),
            ):
                excess = abs(found - expected) - OPTIMIZER_TOL
                if excess > 0:
                    failures.append((float(row["c1"]), name, excess))
    if failures:
        logger.warning("%d sweep check(s) failed", len(failures))
    return pd.DataFrame(failures, columns=["c1", "check", "excess"])
