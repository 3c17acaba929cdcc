"""Entrywise transforms ``f[A]`` and a catalog of candidate functions.

Every function is an :class:`EntrywiseFn`: a vectorized evaluator plus a
metadata record naming its family and parameters.  The metadata drives the
targeted counterexample batteries in :mod:`signlab.verifier`, and the
``spec`` string reconstructs the function (``builtin:...`` or an expression).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from . import expr as _expr
from .errors import EvalError, InputError, PatternViolation

# ---------------------------------------------------------------- metadata


@dataclass(frozen=True)
class PowerSign:
    """``alpha * sgn(x) * |x|**beta`` on reals, extended as ``alpha * z * |z|**(beta-1)``."""

    alpha: float
    beta: float


@dataclass(frozen=True)
class ScaledIdentity:
    alpha: float


@dataclass(frozen=True)
class ScaledConjugate:
    alpha: float


@dataclass(frozen=True)
class Affine:
    c: float
    d: float


@dataclass(frozen=True)
class IrregularPreserver:
    """``alpha |z|**beta exp(i theta(z/|z|))`` with a seeded angle map (see :func:`build_irregular_preserver`)."""

    alpha: float
    beta: float
    seed: int
    wiggle_freq: int = 1
    wiggle_amp: float = 0.1


@dataclass(frozen=True)
class FhPower:
    """``x**beta`` on ``[0, inf)``; undefined (NaN) elsewhere.  ``0**0`` is 1."""

    beta: float


@dataclass(frozen=True)
class AbsolutelyMonotonic:
    """``sum c[m,k] z**m conj(z)**k`` stored as ``((m, k, c), ...)``."""

    coeffs: tuple


@dataclass(frozen=True)
class Parsed:
    text: str


@dataclass(frozen=True)
class Custom:
    """Any other callable; only used programmatically."""

    name: str


@dataclass(frozen=True, eq=False)
class EntrywiseFn:
    evaluator: Callable = field(repr=False)
    meta: object
    spec: str = ""

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            return np.asarray(self.evaluator(z), dtype=complex).reshape(z.shape)

    def scalar(self, z) -> complex:
        return complex(self(np.asarray([z]))[0])

    @property
    def conj_equivariant(self) -> bool:
        """Whether ``f(conj z) = conj f(z)`` holds by construction."""
        return not isinstance(self.meta, (Parsed, Custom))

    def __eq__(self, other):
        return isinstance(other, EntrywiseFn) and self.meta == other.meta

    def __hash__(self):
        return hash(self.meta)


# ------------------------------------------------------------- builders


def power_sign(alpha: float, beta: float) -> EntrywiseFn:
    if alpha <= 0 or beta <= 0:
        raise InputError("power-sign needs alpha, beta > 0")

    def ev(z):
        r = np.abs(z)
        out = np.zeros_like(z)
        nz = r > 0
        out[nz] = alpha * z[nz] * r[nz] ** (beta - 1.0)
        real = z.imag == 0
        # exact real-axis formula
        out[real] = alpha * np.sign(z.real[real]) * np.abs(z.real[real]) ** beta
        return out

    return EntrywiseFn(ev, PowerSign(float(alpha), float(beta)), f"builtin:power-sign:{alpha!r}:{beta!r}")


def scaled_identity(alpha: float) -> EntrywiseFn:
    if alpha <= 0:
        raise InputError("alpha must be > 0")
    return EntrywiseFn(lambda z: alpha * z, ScaledIdentity(float(alpha)), f"builtin:scaled-identity:{alpha!r}")


def scaled_conjugate(alpha: float) -> EntrywiseFn:
    if alpha <= 0:
        raise InputError("alpha must be > 0")
    return EntrywiseFn(lambda z: alpha * np.conj(z), ScaledConjugate(float(alpha)),
                       f"builtin:scaled-conjugate:{alpha!r}")


def affine(c: float, d: float) -> EntrywiseFn:
    return EntrywiseFn(lambda z: c * z + d, Affine(float(c), float(d)), f"builtin:affine:{c!r}:{d!r}")


def fh_power(beta: float) -> EntrywiseFn:
    if beta < 0:
        raise InputError("beta must be >= 0")

    def ev(z):
        ok = (z.imag == 0) & (z.real >= 0)
        out = np.full(z.shape, np.nan + 0j)
        out[ok] = 1.0 if beta == 0 else np.power(z.real[ok], beta)
        return out

    return EntrywiseFn(ev, FhPower(float(beta)), f"builtin:fh-power:{beta!r}")


def absolutely_monotonic(coeffs) -> EntrywiseFn:
    """``coeffs`` maps ``(m, k)`` to ``c`` or is a sequence of ``(m, k, c)`` triples."""
    items = coeffs.items() if isinstance(coeffs, dict) else [((m, k), c) for m, k, c in coeffs]
    triples = tuple(sorted((int(m), int(k), float(c)) for (m, k), c in items))
    if any(m < 0 or k < 0 for m, k, _ in triples):
        raise InputError("exponents must be nonnegative")

    def ev(z):
        out = np.zeros_like(z)
        for m, k, c in triples:
            out = out + c * z ** m * np.conj(z) ** k
        return out

    body = ";".join(f"{m},{k},{c!r}" for m, k, c in triples)
    return EntrywiseFn(ev, AbsolutelyMonotonic(triples), f"builtin:absolutely-monotonic:{body}")


def irregular_angle(meta: IrregularPreserver):
    """The increasing angle map ``gamma: (0, pi) -> (0, pi)`` behind an irregular preserver.

    ``gamma(phi) = phi*pi/4 + sqrt(2)*a*(1 - cos(m*phi))/m``; the derivative is
    at least ``pi/4 - sqrt(2)*a > 0`` for ``a <= 0.2``, so gamma is injective,
    and its range stays inside ``(0, pi)``.
    """
    m, a = meta.wiggle_freq, meta.wiggle_amp

    def gamma(phi):
        return phi * (np.pi / 4) + math.sqrt(2) * a * (1.0 - np.cos(m * phi)) / m

    return gamma


def build_irregular_preserver(alpha: float, beta: float, seed: int = 0) -> EntrywiseFn:
    """Seeded 2x2 sign preserver whose argument map off the real axis is irregular.

    On the reals it is ``alpha sgn(x)|x|**beta``.  Off the axis,
    ``f(z) = alpha |z|**beta exp(i theta)`` with ``theta = gamma(|arg z|)``
    carrying the sign of ``Im z``; the seed picks the frequency and amplitude
    of gamma's perturbation.  Conjugate equivariance is exact because
    ``|arg conj z| = |arg z|`` in floating point.
    """
    if alpha <= 0 or beta <= 0:
        raise InputError("alpha, beta must be > 0")
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 4))
    a = float(rng.uniform(0.05, 0.2))
    return _irregular(IrregularPreserver(float(alpha), float(beta), int(seed), m, a))


def _irregular(meta: IrregularPreserver) -> EntrywiseFn:
    gamma = irregular_angle(meta)
    alpha, beta = meta.alpha, meta.beta

    def ev(z):
        r = np.abs(z)
        real = z.imag == 0
        out = np.empty_like(z)
        out[real] = alpha * np.sign(z.real[real]) * np.abs(z.real[real]) ** beta
        off = ~real
        t = gamma(np.abs(np.angle(z[off])))
        mod = alpha * r[off] ** beta
        out[off] = mod * np.cos(t) + 1j * np.sign(z.imag[off]) * mod * np.sin(t)
        return out

    return EntrywiseFn(ev, meta, f"builtin:irregular:{alpha!r}:{beta!r}:{meta.seed}")


def parse_fn(text: str) -> EntrywiseFn:
    """Parse an expression in the grammar of :mod:`signlab.expr`."""
    tree = _expr.parse(text)
    return EntrywiseFn(lambda z: _expr.evaluate(tree, z), Parsed(text), text)


def custom(fn: Callable, name: str = "custom") -> EntrywiseFn:
    return EntrywiseFn(lambda z: np.vectorize(fn, otypes=[complex])(z) if z.size else z,
                       Custom(name), name)


_BUILTINS = {
    "power-sign": (power_sign, 2),
    "scaled-identity": (scaled_identity, 1),
    "scaled-conjugate": (scaled_conjugate, 1),
    "affine": (affine, 2),
    "fh-power": (fh_power, 1),
    "irregular": (None, 3),
}


def fn_from_spec(spec: str) -> EntrywiseFn:
    """Builtin ``builtin:<family>:<params>`` or an expression."""
    spec = spec.strip()
    if not spec.startswith("builtin:"):
        return parse_fn(spec)
    _, family, *params = spec.split(":")
    if family == "absolutely-monotonic":
        body = ":".join(params)
        triples = [tuple(t.split(",")) for t in body.split(";") if t]
        return absolutely_monotonic([(int(m), int(k), float(c)) for m, k, c in triples])
    if family not in _BUILTINS:
        raise InputError(f"unknown builtin {family!r}; known: {sorted(_BUILTINS) + ['absolutely-monotonic']}")
    builder, arity = _BUILTINS[family]
    if len(params) != arity:
        raise InputError(f"builtin {family} takes {arity} parameter(s)")
    if family == "irregular":
        return build_irregular_preserver(float(params[0]), float(params[1]), int(params[2]))
    return builder(*(float(p) for p in params))


# ------------------------------------------------------------- application


def apply_entrywise(f: EntrywiseFn, M) -> np.ndarray:
    """Entrywise image ``(f(m_ij))``, deliberately not symmetrized."""
    arr = np.asarray(M, dtype=complex)
    out = f(arr)
    bad = ~np.isfinite(out)
    if np.any(bad):
        idx = tuple(int(i) for i in np.argwhere(bad)[0])
        raise EvalError(f"f is not finite at entry {idx} (value {arr[idx]})", idx)
    return out


def apply_entrywise_stack(f: EntrywiseFn, stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Image of a stack of matrices and a mask of those with all-finite images."""
    out = f(stack)
    return out, np.all(np.isfinite(out), axis=(-2, -1))


def pattern_of(G) -> np.ndarray:
    """Boolean adjacency mask (no diagonal) for a graph with an ``adjacency()`` method or a mask."""
    if hasattr(G, "adjacency"):
        return G.adjacency()
    return np.asarray(G, dtype=bool)


def apply_entrywise_graph(f: EntrywiseFn, G, M) -> np.ndarray:
    """``f_G[M]``: f on the diagonal and on edges, exact zeros elsewhere."""
    arr = np.asarray(M, dtype=complex)
    adj = pattern_of(G)
    n = arr.shape[0]
    if adj.shape != (n, n):
        raise InputError("graph and matrix sizes differ")
    keep = adj | np.eye(n, dtype=bool)
    if np.any(arr[~keep] != 0):
        i, j = (int(x) for x in np.argwhere((arr != 0) & ~keep)[0])
        raise PatternViolation(f"nonzero entry at non-edge ({i + 1}, {j + 1})")
    out = np.zeros_like(arr)
    vals = f(arr[keep])
    if not np.all(np.isfinite(vals)):
        pos = np.argwhere(keep)[np.flatnonzero(~np.isfinite(vals))[0]]
        idx = (int(pos[0]), int(pos[1]))
        raise EvalError(f"f is not finite at entry {idx}", idx)
    out[keep] = vals
    return out


def apply_graph_stack(f: EntrywiseFn, adj: np.ndarray, stack: np.ndarray):
    n = stack.shape[-1]
    keep = adj | np.eye(n, dtype=bool)
    out = np.where(keep, f(stack), 0)
    return out, np.all(np.isfinite(out), axis=(-2, -1))


# ------------------------------------------------------------- FH exponents


class FhStatus(str, Enum):
    PRESERVER = "Preserver"
    NON_PRESERVER = "NonPreserver"


INTEGER_TOL = 1e-12


def is_natural(beta: float, tol: float = INTEGER_TOL) -> bool:
    """Whether beta is a nonnegative integer up to ``tol`` (0 counts)."""
    return beta > -tol and abs(beta - round(beta)) <= tol


def fh_exponent_status(n: int, beta: float) -> FhStatus:
    """Whether ``x -> x**beta`` preserves PSD on n x n matrices with nonnegative entries."""
    if n < 2:
        raise InputError("n must be >= 2")
    if is_natural(beta) or beta >= n - 2 - INTEGER_TOL:
        return FhStatus.PRESERVER
    return FhStatus.NON_PRESERVER
