"""Hermitian matrices and positivity / Loewner-order verdicts.

All verdicts come from the full real spectrum (``numpy.linalg.eigvalsh``) and
use a relative boundary band: a matrix whose smallest eigenvalue lies within
``tol * max(1, scale)`` of zero is never called definite or indefinite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, InputError, NotHermitianError, SingularBlock

DEFAULT_TOL = 1e-9


class Kind(str, Enum):
    PD = "PositiveDefinite"
    SINGULAR = "SingularPSD"
    INDEFINITE = "Indefinite"
    MARGINAL = "Marginal"


@dataclass(frozen=True)
class PositivityVerdict:
    kind: Kind
    min_eigenvalue: float
    scale: float
    hermitian: bool = True

    @property
    def decided(self) -> bool:
        return self.kind is not Kind.MARGINAL

    def positive(self, mode: str) -> bool | None:
        """Whether the matrix is positive in ``mode`` ('pd' or 'psd').

        Returns None when the verdict is Marginal, i.e. undecidable at the
        working tolerance.
        """
        if not self.hermitian:
            return False
        if self.kind is Kind.MARGINAL:
            return None
        if mode == "pd":
            return self.kind is Kind.PD
        if mode == "psd":
            return self.kind in (Kind.PD, Kind.SINGULAR)
        raise InputError(f"unknown mode {mode!r}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "minEigenvalue": float(self.min_eigenvalue),
            "scale": float(self.scale),
            "hermitian": bool(self.hermitian),
        }


def _as_square(a) -> np.ndarray:
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise InputError(f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError("matrix has non-finite entries")
    return arr


def hermitian_defect(a) -> float:
    arr = np.asarray(a, dtype=np.complex128)
    return float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0


def is_hermitian(a, tol: float = DEFAULT_TOL) -> bool:
    arr = np.asarray(a, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        return False
    size = max(1.0, float(np.max(np.abs(arr)))) if arr.size else 1.0
    return hermitian_defect(arr) <= tol * size


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Square complex matrix with exact conjugate symmetry.

    The constructor symmetrizes ``(a + a^H) / 2`` after checking that the
    input is Hermitian up to ``1e-12`` relative, so ``entries[j, i]`` is the
    exact conjugate of ``entries[i, j]`` and the diagonal is exactly real.
    ``exact_singular`` marks matrices that are singular by exact algebra;
    only those may receive a SingularPSD verdict.
    """

    entries: np.ndarray
    exact_singular: bool = False

    def __post_init__(self):
        arr = _as_square(self.entries)
        size = max(1.0, float(np.max(np.abs(arr))))
        if hermitian_defect(arr) > 1e-12 * size:
            raise NotHermitianError("matrix is not Hermitian")
        sym = (arr + arr.conj().T) / 2
        sym.setflags(write=False)
        object.__setattr__(self, "entries", sym)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.entries, other.entries))

    def __hash__(self):
        return hash(self.entries.tobytes())

    def permuted(self, perm) -> "HermitianMatrix":
        p = np.asarray(perm)
        return HermitianMatrix(self.entries[np.ix_(p, p)], self.exact_singular)

    def to_json(self) -> list:
        return encode_matrix(self.entries)

    @classmethod
    def from_json(cls, obj, exact_singular: bool = False) -> "HermitianMatrix":
        return cls(decode_matrix(obj), exact_singular)


def _matrix_of(M) -> tuple[np.ndarray, bool]:
    if isinstance(M, HermitianMatrix):
        return M.entries, M.exact_singular
    return _as_square(M), False


def classify(min_eig: float, scale: float, tol: float = DEFAULT_TOL,
             exact_singular: bool = False) -> Kind:
    band = tol * max(1.0, scale)
    if min_eig > band:
        return Kind.PD
    if min_eig < -band:
        return Kind.INDEFINITE
    return Kind.SINGULAR if exact_singular else Kind.MARGINAL


def batch_exact_singular(stack: np.ndarray) -> np.ndarray:
    """Mask of matrices that are exactly diagonal with nonnegative real diagonal and a zero on it.

    Such a matrix has its diagonal as its exact spectrum, so it is singular PSD
    with no rounding involved (the zero matrix is the common case).
    """
    stack = np.asarray(stack)
    n = stack.shape[-1]
    diag = np.diagonal(stack, axis1=-2, axis2=-1)
    offdiag_zero = np.all((stack == 0) | np.eye(n, dtype=bool), axis=(-2, -1))
    d = np.real(diag)
    return (offdiag_zero & np.all(np.imag(diag) == 0, axis=-1) & np.all(d >= 0, axis=-1)
            & np.any(d == 0, axis=-1))


def positivity_verdict(M, tol: float = DEFAULT_TOL, exact_singular: bool | None = None
                       ) -> PositivityVerdict:
    """Classify a matrix as PD, singular PSD, indefinite or marginal.

    Non-Hermitian input (allowed for images ``f[A]``) is reported with
    ``hermitian=False``; the spectral fields then describe its Hermitian part.
    """
    if tol <= 0:
        raise InputError("tolerance must be positive")
    arr, stamped = _matrix_of(M)
    if exact_singular is None:
        exact_singular = stamped
    herm = True
    if not isinstance(M, HermitianMatrix):
        herm = is_hermitian(arr, tol)
        arr = (arr + arr.conj().T) / 2
    exact_singular = bool(exact_singular or batch_exact_singular(arr))
    eigs = np.linalg.eigvalsh(arr)
    lmin = float(eigs[0])
    scale = float(np.max(np.abs(eigs)))
    return PositivityVerdict(classify(lmin, scale, tol, exact_singular), lmin, scale, herm)


def batch_spectra(stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Smallest eigenvalue and spectral radius for a stack of Hermitian matrices."""
    if stack.shape[-1] == 2:
        # Closed form; absolute error stays at roundoff of the spectral radius.
        a, d = stack[..., 0, 0].real, stack[..., 1, 1].real
        mid = (a + d) / 2
        rad = np.hypot((a - d) / 2, np.abs(stack[..., 0, 1]))
        return mid - rad, np.abs(mid) + rad
    eigs = np.linalg.eigvalsh(stack)
    return eigs[..., 0], np.max(np.abs(eigs), axis=-1)


def batch_hermitian(stack: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    defect = np.max(np.abs(stack - np.conj(np.swapaxes(stack, -1, -2))), axis=(-2, -1))
    size = np.maximum(1.0, np.max(np.abs(stack), axis=(-2, -1)))
    finite = np.all(np.isfinite(stack), axis=(-2, -1))
    return finite & (defect <= tol * size)


def leading_principal_minors(M) -> list[float]:
    """Determinants of the top-left k x k blocks, k = 1..n (LU per block)."""
    arr, _ = _matrix_of(M)
    return [float(np.real(np.linalg.det(arr[:k, :k]))) for k in range(1, arr.shape[0] + 1)]


def schur_complement(M, k: int) -> HermitianMatrix:
    """``D - C^* A^{-1} C`` for the partition with leading block ``A`` of size k."""
    arr, _ = _matrix_of(M)
    n = arr.shape[0]
    if not 1 <= k < n:
        raise InputError(f"block size k={k} must satisfy 1 <= k < n={n}")
    A, C, D = arr[:k, :k], arr[:k, k:], arr[k:, k:]
    if np.linalg.cond(A) > 1e13:
        raise SingularBlock(f"leading {k}x{k} block is singular")
    return HermitianMatrix(D - C.conj().T @ np.linalg.solve(A, C))


def loewner_compare(A, B, tol: float = DEFAULT_TOL) -> PositivityVerdict:
    """Verdict on ``A - B``; PD means A > B, PSD means A >= B."""
    a, _ = _matrix_of(A)
    b, _ = _matrix_of(B)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    # Exact equality is the one boundary case known by algebra.
    return positivity_verdict(HermitianMatrix(a - b), tol, exact_singular=bool(np.array_equal(a, b)))


def encode_matrix(a) -> list:
    """Array-of-arrays JSON form; real entries as numbers, complex as [re, im]."""
    arr = np.asarray(a, dtype=np.complex128)
    return [[float(x.real) if x.imag == 0 else [float(x.real), float(x.imag)] for x in row]
            for row in arr]


def decode_matrix(obj) -> np.ndarray:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        rows = [[complex(x[0], x[1]) if isinstance(x, (list, tuple)) else complex(x) for x in row]
                for row in obj]
        arr = np.array(rows, dtype=np.complex128)
    except (TypeError, ValueError, IndexError) as exc:
        raise InputError(f"cannot decode matrix: {exc}") from exc
    return _as_square(arr)
