"""Bound states of the N-dimensional radial Schrodinger equation with
position-dependent mass, for potentials V(r) = -V1 r^-alpha + V2 r^beta + V3.

Energies and radial wavefunctions come from a power-series recurrence about
the origin, quantized by log-derivative matching against an inward tail
integration, and are cross-validated by an independent direct ODE integrator.
"""

from .eigensolver import (
    SolverConfig,
    coulomb_reference_energy,
    find_eigenvalue,
    scan_spectrum,
)
from .mass_expansion import (
    SeriesVector,
    cauchy_product,
    constant_mass,
    eval_series,
    expand_exponential,
    logderiv_from_series,
    mass_from_series,
)
from .model import (
    EigenResult,
    MassProfile,
    PotentialSpec,
    QuantumNumbers,
    SeriesSolution,
    b_from_energy,
    make_cornell,
    make_coulomb,
    make_linear,
    make_oscillator,
)
from .oracle import GridSpec, integrate_radial, numerov_eigenvalue
from .recurrence import (
    ConvolutionTables,
    RecurrenceKind,
    coefficient_closed_forms_cornell,
    coefficient_closed_forms_expmass,
    coulomb_closed_form_coefficients,
    coulomb_expmass_closed_forms,
    generate_coefficients,
)
from .wavefunction import (
    RadialWavefunction,
    coulomb_a0_reference,
    count_nodes,
    evaluate,
    normalize,
    ode_residual,
    trust_radius,
)

__version__ = "0.1.0"

__all__ = [
    "PotentialSpec",
    "QuantumNumbers",
    "MassProfile",
    "SeriesSolution",
    "EigenResult",
    "make_cornell",
    "make_coulomb",
    "make_oscillator",
    "make_linear",
    "b_from_energy",
    "SeriesVector",
    "expand_exponential",
    "constant_mass",
    "mass_from_series",
    "logderiv_from_series",
    "eval_series",
    "cauchy_product",
    "RecurrenceKind",
    "ConvolutionTables",
    "generate_coefficients",
    "coefficient_closed_forms_cornell",
    "coefficient_closed_forms_expmass",
    "coulomb_closed_form_coefficients",
    "coulomb_expmass_closed_forms",
    "RadialWavefunction",
    "trust_radius",
    "evaluate",
    "normalize",
    "ode_residual",
    "count_nodes",
    "coulomb_a0_reference",
    "SolverConfig",
    "find_eigenvalue",
    "scan_spectrum",
    "coulomb_reference_energy",
    "GridSpec",
    "integrate_radial",
    "numerov_eigenvalue",
]
