"""Exact and smoothed tools for the 3-uniform (3,k)-Turán problem."""
from .construction import (TuranInstance, build_turan, complement_count_closed, density_limit,
                           density_table)
from .errors import (BudgetExceeded, DegenerateGradientError, DivisibilityError, FormatError,
                     InputError, TuranError)
from .hypergraph import (TripleFamily, complement, count_edges_within, ksubsets, rank_triple,
                         unrank_triple)
from .search import SearchResult, exhaustive_max_kfree, max_kfree, min_cover
from .smoothing import (EdgeSystem, KktReport, RelaxedEdgeVector, SmoothingParams, gauss_cdf,
                        grad_N, grad_R, kkt_fit, kkt_from_gradients, objective_N, objective_R,
                        soft_count, soft_membership, symmetry_report)
from .verifier import VerifyReport, is_turan_property, max_edges_in_any_ksubset

__version__ = "0.1.0"
