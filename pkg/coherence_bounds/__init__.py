from .coherence import rel_ent_coherence, total_coherence
from .correlations import (
    BellDiagonalParams,
    CorrelationReport,
    bell_diagonal_state,
    classical_correlation,
    mutual_information,
    quantum_discord,
)
from .measurement import Measurement, measure_a, qubit_projector_pair
from .miac import BoundReport, bound_report, max_extra_miac, max_extra_miatc, miac, miatc
from .qmatrix import BipartiteState

__version__ = "0.1.0"

__all__ = [
    "BellDiagonalParams",
    "BipartiteState",
    "BoundReport",
    "CorrelationReport",
    "Measurement",
    "bell_diagonal_state",
    "bound_report",
    "classical_correlation",
    "max_extra_miac",
    "max_extra_miatc",
    "measure_a",
    "miac",
    "miatc",
    "mutual_information",
    "quantum_discord",
    "qubit_projector_pair",
    "rel_ent_coherence",
    "total_coherence",
    "__version__",
]
