"""Capacities of two-qubit unitary gates by stochastic optimization."""

from .annealer import (AnnealConfig, OptProblem, OptResult, default_config,
                       gaussian_complex, maximize, maximize_chi,
                       maximize_delta_chi, maximize_entanglement)
from .gates import (CanonicalParams, GateFamily, canonical_gate, embed_gate,
                    embedded_family_gate, family_params)
from .linalg import (DensityMatrix, StateVector, SubsystemLayout,
                     entanglement_entropy, gram_schmidt_unitarize,
                     hermitian_eigenvalues, normalize_state, partial_trace,
                     tensor_product, von_neumann_entropy)
from .objectives import (EncodedEnsemble, EnsembleReduced, FreeEnsemble,
                         ProductInput, chi_u_objective, delta_chi_objective,
                         entanglement_gain, final_entanglement,
                         holevo_information)
from .sweep import (PointTask, ResultRecord, SweepSpec, compare_report, emit,
                    load_records, reevaluate, run_point, run_sweep)

__version__ = "0.1.0"
