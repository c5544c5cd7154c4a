"""
Quantum estimation of entanglement.

Entanglement is not an observable, so it has to be inferred from
measurements on the state.  This package computes the quantum Fisher
information (QFI) of families of entangled states, the resulting
quantum Cramer-Rao bounds on any entanglement measure, the quantum
signal-to-noise ratio and the number of measurements needed for a
given relative error.

Modules
-------
linalg
    Hermitian eigendecomposition, partial transpose and trace, negativity.
estimation
    SLD, QFI and QFI matrices, reparametrization, classical Fisher
    information, measurement budgets, Monte Carlo saturation runs.
families
    Two-qubit and two-qutrit families with their entanglement measures.
gaussian
    Two-mode Gaussian states: covariance matrices, symplectic
    eigenvalues, pure-state QFI in phase space, squeezed thermal states.
fock
    Number-basis routes used as independent checks.
report, verify, cli
    Bound records and CSV output, regression catalogue, command line.
"""
from .errors import DomainError, InvalidPOVMError, NotHermitianError
from .estimation import (EstimationBudget, ParamFamily, QfiResult, SimulationResult, budget,
                         classical_fisher, m_delta, qfi_matrix, qfi_pure, qfi_scalar, qsnr,
                         reparametrize, simulate_crb, sld, sld_povm, state_derivative,
                         transfer_from_jacobian)
from .families import (Branch, Measure, closed_form_qfi, horodecki_family, orbit_family,
                       qfi_vs_measure, scalar_bound, schmidt_family, werner_family)
from .gaussian import (GaussianMeasure, TwoModeCovariance, gaussian_char_fn, sts_bounds,
                       sts_qfi_matrix, symplectic_eig_pt, wick_qfi_pure)
from .linalg import hermitian_eig, negativity, partial_trace, partial_transpose

__all__ = [
    "DomainError",
    "InvalidPOVMError",
    "NotHermitianError",
    "EstimationBudget",
    "ParamFamily",
    "QfiResult",
    "SimulationResult",
    "budget",
    "classical_fisher",
    "m_delta",
    "qfi_matrix",
    "qfi_pure",
    "qfi_scalar",
    "qsnr",
    "reparametrize",
    "simulate_crb",
    "sld",
    "sld_povm",
    "state_derivative",
    "transfer_from_jacobian",
    "gaussian_char_fn",
    "Branch",
    "Measure",
    "closed_form_qfi",
    "horodecki_family",
    "orbit_family",
    "qfi_vs_measure",
    "scalar_bound",
    "schmidt_family",
    "werner_family",
    "GaussianMeasure",
    "TwoModeCovariance",
    "sts_bounds",
    "sts_qfi_matrix",
    "symplectic_eig_pt",
    "wick_qfi_pure",
    "hermitian_eig",
    "negativity",
    "partial_trace",
    "partial_transpose",
]

__version__ = "0.1.0"
