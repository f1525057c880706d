"""Detection of exactly suppressed transitions, plus the Z3 balanced-output rule."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from qmultinomial.combinat import Composition, as_composition, enumerate_compositions
from qmultinomial.optics import as_matrix, fourier
from qmultinomial.transition import p_quantum

SUPPRESSION_THRESHOLD = 1e-12
Z3_RULE = "z3-balanced"


@dataclass(frozen=True)
class SuppressionRecord:
    input: Composition
    output: Composition
    probability: float
    predicted_by_rule: str | None = None


def z3_balanced_rule(n: Sequence[int]) -> Literal["allowed", "suppressed"]:
    """Z3 selection rule of the 3-port DFT at a balanced output ``(d, d, d)``.

    Suppressed unless ``2 n_1 + n_2 = 0 (mod 3)`` with ports numbered from 1.
    """
    n = as_composition(n, k=3)
    if sum(n) % 3:
        raise ValueError(f"balanced output needs m divisible by 3, got m={sum(n)}")
    return "allowed" if (2 * n[0] + n[1]) % 3 == 0 else "suppressed"


def _is_fourier3(U: np.ndarray) -> bool:
    return U.shape == (3, 3) and np.allclose(U, fourier(3), rtol=0, atol=1e-12)


def scan_suppressed(U, n: Sequence[int], threshold: float = SUPPRESSION_THRESHOLD) -> list[SuppressionRecord]:
    """Every output whose boson probability falls below ``threshold``, in colex order.

    When ``U`` is the 3-port DFT, balanced outputs the Z3 rule predicts are
    tagged with that rule.
    """
    U = as_matrix(U)
    n = as_composition(n, k=U.shape[0])
    m = sum(n)
    tag_z3 = _is_fourier3(U) and m % 3 == 0 and z3_balanced_rule(n) == "suppressed"
    records = []
    for c in enumerate_compositions(m, len(n)):
        prob = p_quantum(U, n, c).probability
        if prob < threshold:
            balanced = len(set(c)) == 1
            rule = Z3_RULE if tag_z3 and balanced else None
            records.append(SuppressionRecord(n, c, prob, rule))
    return records
