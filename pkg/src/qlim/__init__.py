"""Optimal linear interferometers for imaging weak incoherent point sources.

The package compares two ways of choosing the unitary interferometer placed
before photon counting: the QR-based construction, which is optimal only in
inversion-symmetric scenes, and the eigenbasis of ``P = B A^+`` (and its
limit, the SLD eigenbasis), which attains the quantum Fisher information.
"""

from .errors import (BadBinding, BadConfig, GaugeResidual, NonFinite, NotHermitian, NotPSD,
                     NotSquare, NotUnitary, QlimError, SingularOutcome, SupportLeak,
                     SupportMismatch)
from .fisher import (SldBundle, cfi, classical_fidelity, diagonal_fidelity, qfi,
                     qfi_from_fidelity, qfi_state, quantum_fidelity, row_fidelity, sld_solve)
from .interferometer import (InterferometerPlan, Method, build_finite_shift, build_qr, build_sld,
                             finite_shift_plan, plan_residual, sld_plan)
from .matdecomp import SvdResult, eigh_fixed, pinv, qr_positive, sqrtm_psd, svd_fixed
from .oracle import SearchResult, haar_unitary, random_search_cfi, uhlmann_fidelity
from .purify import (OverlapDecomp, PurificationPair, local_consistency, overlap_decomp,
                     purification_pair, purifications)
from .report import FisherReport, ReportSettings, fisher_report, scan
from .scene import (Binding, Scene, TransferMatrix, build_scene, density, density_derivative,
                    asymmetric_scene, load_scene, symmetric_scene, transfer_derivative, transfer_matrix)

__version__ = "0.1.0"
