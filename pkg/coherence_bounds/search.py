"""Search over Alice's rank-one projective measurements.

For a qubit A the measurement is a pair of antipodal Bloch vectors,
parameterized by (theta, phi). The search evaluates a coarse grid in one
vectorized call, then refines the best grid points with Nelder-Mead. For
larger A it falls back to sampling Haar-random bases, which only gives a
heuristic bound.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import numpy.typing as npt
from scipy.optimize import minimize

from .config import SearchConfig
from .errors import ConfigurationError
from .random_states import random_unitaries


logger = logging.getLogger(__name__)

# (n, 2) array of (theta, phi) -> (n,) objective values
BlochObjective = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]
# (n, d, d) stack of bases, row k of each = k-th basis vector -> (n,) values
BasisObjective = Callable[[npt.NDArray[np.complex128]], npt.NDArray[np.float64]]

TraceEntry = tuple[float, float, float]


@dataclass(frozen=True)
class BlochSearchResult:
    theta: float
    phi: float
    value: float
    trace: tuple[TraceEntry, ...]
    evaluations: int


@dataclass(frozen=True, eq=False)
class BasisSearchResult:
    basis: npt.NDArray[np.complex128]
    value: float
    evaluations: int


def bloch_grid(resolution: int) -> npt.NDArray[np.float64]:
    """Grid points ordered theta-major over [0, pi] x [0, 2pi)."""
    if resolution < 2:
        raise ConfigurationError(f"grid_resolution must be >= 2, got {resolution}")
    thetas = np.linspace(0.0, np.pi, resolution)
    phis = 2.0 * np.pi * np.arange(resolution) / resolution
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    return np.column_stack([tt.ravel(), pp.ravel()])


def minimize_on_bloch(
    objective: BlochObjective,
    *,
    config: Optional[SearchConfig] = None,
    maximize: bool = False,
) -> BlochSearchResult:
    if config is None:
        config = SearchConfig()
    sign = -1.0 if maximize else 1.0

    grid = bloch_grid(config.grid_resolution)
    values = sign * np.asarray(objective(grid), dtype=np.float64)
    # Stable sort: ties resolve to the first grid index
    order = np.argsort(values, kind="stable")
    best_idx = int(order[0])
    best_theta, best_phi = (float(x) for x in grid[best_idx])
    best_value = float(values[best_idx])
    evaluations = grid.shape[0]
    trace: list[TraceEntry] = [(best_theta, best_phi, sign * best_value)]

    d_theta = np.pi / (config.grid_resolution - 1)
    d_phi = 2.0 * np.pi / config.grid_resolution

    def scalar(x: npt.NDArray[np.float64]) -> float:
        return float(sign * objective(x[None, :])[0])

    for idx in order[: config.refine_starts]:
        start = grid[int(idx)]
        simplex = np.array(
            [start, start + [0.5 * d_theta, 0.0], start + [0.0, 0.5 * d_phi]],
            dtype=np.float64,
        )
        result = minimize(
            scalar,
            start,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "xatol": config.simplex_tol,
                # Terminate on simplex size alone
                "fatol": np.inf,
                "maxiter": config.max_iter,
            },
        )
        evaluations += int(result.nfev)
        theta, phi = (float(x) for x in result.x)
        value = float(result.fun)
        trace.append((theta, phi, sign * value))
        logger.debug(
            "Nelder-Mead from (%.4f, %.4f) -> (%.6f, %.6f) value=%.12g in %d evals",
            start[0], start[1], theta, phi, sign * value, result.nfev,
        )
        if value < best_value:
            best_theta, best_phi, best_value = theta, phi, value

    return BlochSearchResult(
        theta=best_theta,
        phi=best_phi,
        value=sign * best_value,
        trace=tuple(trace),
        evaluations=evaluations,
    )


def minimize_over_bases(
    objective: BasisObjective,
    dim: int,
    *,
    config: Optional[SearchConfig] = None,
    maximize: bool = False,
) -> BasisSearchResult:
    """Best of ``config.haar_samples`` Haar-random rank-one projective bases."""
    if config is None:
        config = SearchConfig()
    if config.haar_samples <= 0:
        raise ConfigurationError(
            f"Subsystem A has dimension {dim} > 2; set SearchConfig.haar_samples > 0"
        )
    rng = np.random.default_rng(config.random_state)
    unitaries = random_unitaries(dim, config.haar_samples, rng)
    # Basis vectors are the columns; move them to rows
    bases = np.transpose(unitaries, (0, 2, 1))
    sign = -1.0 if maximize else 1.0
    values = sign * np.asarray(objective(bases), dtype=np.float64)
    best = int(np.argsort(values, kind="stable")[0])
    logger.debug("Haar basis search over %d samples: best index %d", config.haar_samples, best)
    return BasisSearchResult(
        basis=bases[best],
        value=float(sign * values[best]),
        evaluations=config.haar_samples,
    )
