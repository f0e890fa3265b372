from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class SearchConfig:
    """Tuning knobs for the measurement search on the Bloch sphere.

    The defaults reproduce the worked examples to 1e-6 in well under a second
    per state. Changing them trades accuracy against runtime without touching
    the public function signatures.
    """

    # Coarse grid over (theta, phi) in [0, pi] x [0, 2pi)
    grid_resolution: int = 24
    refine_starts: int = 3

    # Nelder-Mead
    simplex_tol: float = 1e-7
    max_iter: int = 4000

    # d_A > 2 fallback: random rank-one projective bases
    haar_samples: int = 512
    random_state: int = 42


@dataclass
class Tolerances:
    optimizer: float = 1e-6
    classifier: float = 1e-8
    null_condition: float = 1e-5
    saturation: float = 1e-7
    # "only if" direction of the null-extra-coherence audit
    detection_threshold: float = 1e-3
    detection_rate: float = 0.99


@dataclass
class AuditConfig:
    """Batch sizes, dimensions and seed for the randomized theorem audits."""

    n_states: int = 500
    n_measurements: int = 20
    n_pure: int = 200
    n_null: int = 100
    dim_a: int = 2
    dim_b: int = 2
    seed: int = 42
    n_jobs: int = 1
    tolerances: Tolerances = field(default_factory=Tolerances)
    search: SearchConfig = field(default_factory=SearchConfig)
