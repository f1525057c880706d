"""Exact photon-number statistics of lossless linear interferometers.

Transition probabilities are evaluated as a coherent sum over routing
matrices (integer points of a transportation polytope) weighted by the
multivariate hypergeometric distribution, and cross-checked against the
permanent of the scattering submatrix.
"""

from qmultinomial.combinat import (
    CapacityError,
    enumerate_compositions,
    enumerate_routing_matrices,
    hypergeometric_weights,
    multinomial,
    multiplicity,
)
from qmultinomial.optics import (
    beam_splitter,
    fourier,
    random_unitary,
    read_matrix,
    tritter,
    validate_unitary,
    write_matrix,
)
from qmultinomial.oracle import determinant, p_via_permanent, permanent
from qmultinomial.transition import (
    OutputDistribution,
    TransitionReport,
    amplitude,
    output_distribution,
    p_classical,
    p_fermionic,
    p_quantum,
    qc_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "OutputDistribution",
    "TransitionReport",
    "amplitude",
    "beam_splitter",
    "determinant",
    "enumerate_compositions",
    "enumerate_routing_matrices",
    "fourier",
    "hypergeometric_weights",
    "multinomial",
    "multiplicity",
    "output_distribution",
    "p_classical",
    "p_fermionic",
    "p_quantum",
    "p_via_permanent",
    "permanent",
    "qc_ratio",
    "random_unitary",
    "read_matrix",
    "tritter",
    "validate_unitary",
    "write_matrix",
]
