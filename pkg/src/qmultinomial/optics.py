"""Interferometer matrices: constructors, unitarity check, JSON I/O.

Matrices are plain ``numpy`` complex128 arrays of shape ``(k, k)`` with
``U[i, j]`` the single-photon amplitude from input port ``i`` to output
port ``j``. Constructors return read-only arrays.

JSON schema::

    {"k": int, "re": [[float, ...], ...], "im": [[float, ...], ...]}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_TOL = 1e-10


class MatrixFormatError(ValueError):
    """Malformed matrix file or array."""


class UnitarityError(ValueError):
    """Matrix fails the unitarity check."""


@dataclass(frozen=True)
class UnitarityCheck:
    passed: bool
    deviation: float
    tol: float

    def __bool__(self) -> bool:
        return self.passed


def _frozen(U: np.ndarray) -> np.ndarray:
    U = np.array(U, dtype=np.complex128)
    U.setflags(write=False)
    return U


def as_matrix(U) -> np.ndarray:
    """Coerce to a square complex array with ``k >= 2``."""
    U = np.asarray(U, dtype=np.complex128)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise MatrixFormatError(f"matrix must be square, got shape {U.shape}")
    if U.shape[0] < 2:
        raise MatrixFormatError("interferometer needs at least two ports")
    return U


def validate_unitary(U, tol: float = DEFAULT_TOL) -> UnitarityCheck:
    """Max-entry deviation of ``U^dagger U`` from the identity.

    The returned check is truthy iff the deviation is at most ``tol``.
    """
    U = np.asarray(U, dtype=np.complex128)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise MatrixFormatError(f"matrix must be square, got shape {U.shape}")
    gram = U.conj().T @ U
    deviation = float(np.max(np.abs(gram - np.eye(U.shape[0]))))
    return UnitarityCheck(deviation <= tol, deviation, tol)


def beam_splitter(T: float) -> np.ndarray:
    """Lossless beam splitter ``[[t, i r], [i r, t]]`` with ``t = sqrt(T)``.

    ``T`` is the transmittance; the reflectance is ``R = 1 - T``.
    """
    T = float(T)
    if not 0.0 <= T <= 1.0:
        raise ValueError(f"transmittance must lie in [0, 1], got {T}")
    t = math.sqrt(T)
    r = math.sqrt(1.0 - T)
    return _frozen([[t, 1j * r], [1j * r, t]])


def fourier(k: int) -> np.ndarray:
    """``k``-port DFT interferometer, ``U_ij = w^(i j) / sqrt(k)``.

    Port labels ``i, j`` run over ``1..k``; array index ``a`` holds port
    ``a + 1``. The 1-based exponent matters for phase-sensitive selection
    rules, so it is kept rather than shifted to ``0..k-1``.
    """
    k = int(k)
    if k < 2:
        raise ValueError("fourier needs k >= 2")
    ports = np.arange(1, k + 1)
    # reduce the exponent mod k before taking the exponential
    exponent = np.outer(ports, ports) % k
    return _frozen(np.exp(2j * np.pi * exponent / k) / math.sqrt(k))


def _two_mode(k: int, a: int, b: int, theta: float) -> np.ndarray:
    M = np.eye(k, dtype=np.complex128)
    c, s = math.cos(theta), math.sin(theta)
    M[a, a] = M[b, b] = c
    M[a, b] = M[b, a] = 1j * s
    return M


def tritter(theta1: float, theta2: float, theta3: float, phi: float) -> np.ndarray:
    """Three-port interferometer with three mixing angles and one phase.

    Built as ``B12(theta3) @ P2(phi) @ B23(theta2) @ B12(theta1)`` where
    ``Bab(theta)`` is a beam splitter on ports ``a, b`` with transmittance
    ``cos(theta)**2`` (same convention as :func:`beam_splitter`) and
    ``P2(phi)`` a phase shift ``exp(i phi)`` on port 2.
    """
    phase = np.diag([1.0, np.exp(1j * phi), 1.0])
    U = _two_mode(3, 0, 1, theta3) @ phase @ _two_mode(3, 1, 2, theta2) @ _two_mode(3, 0, 1, theta1)
    return _frozen(U)


def random_unitary(k: int, seed: int) -> np.ndarray:
    """Haar-random ``k x k`` unitary, deterministic in ``seed``.

    QR-orthonormalizes a complex Gaussian matrix and multiplies each column
    of ``Q`` by the phase of the matching diagonal entry of ``R`` so the
    result is Haar distributed.
    """
    if k < 2:
        raise ValueError("random_unitary needs k >= 2")
    rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / math.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return _frozen(Q * (d / np.abs(d)))


def matrix_to_dict(U) -> dict:
    U = as_matrix(U)
    return {"k": int(U.shape[0]), "re": U.real.tolist(), "im": U.imag.tolist()}


def matrix_from_dict(data: dict, tol: float = DEFAULT_TOL, allow_nonunitary: bool = False) -> np.ndarray:
    """Build a matrix from the JSON schema, validating shape and unitarity."""
    try:
        k = data["k"]
        re = data["re"]
        im = data["im"]
    except (KeyError, TypeError) as exc:
        raise MatrixFormatError(f"matrix data needs 'k', 're' and 'im': {exc}") from None
    if not isinstance(k, int) or isinstance(k, bool) or k < 2:
        raise MatrixFormatError(f"'k' must be an integer >= 2, got {k!r}")
    for name, block in (("re", re), ("im", im)):
        if not isinstance(block, list) or len(block) != k:
            raise MatrixFormatError(f"'{name}' must have {k} rows")
        for row in block:
            if not isinstance(row, list) or len(row) != k:
                raise MatrixFormatError(f"every row of '{name}' must have {k} entries")
    try:
        U = np.array(re, dtype=np.float64) + 1j * np.array(im, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"non-numeric matrix entry: {exc}") from None
    if not allow_nonunitary:
        check = validate_unitary(U, tol)
        if not check:
            raise UnitarityError(
                f"matrix is not unitary: max |U^dagger U - I| = {check.deviation:.3e} > {tol:g}"
            )
    return _frozen(U)


def write_matrix(path, U) -> None:
    """Write ``U`` as JSON; floats are emitted with 17 significant digits."""
    Path(path).write_text(json.dumps(matrix_to_dict(U), indent=1) + "\n")


def read_matrix(path, tol: float = DEFAULT_TOL, allow_nonunitary: bool = False) -> np.ndarray:
    """Read a JSON matrix file.

    Raises :class:`MatrixFormatError` on malformed content and
    :class:`UnitarityError` when the matrix deviates from unitarity by more
    than ``tol`` (unless ``allow_nonunitary``).
    """
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: invalid JSON ({exc})") from None
    return matrix_from_dict(data, tol=tol, allow_nonunitary=allow_nonunitary)
