"""Explicit test matrices used to separate sign preservers from other functions.

Each constructor returns a :class:`~signlab.numeric.HermitianMatrix` (or a
plain array for the non-Hermitian 2x2 test matrices).  Matrices that are
singular by exact algebra carry ``exact_singular=True`` so that a verdict may
call them SingularPSD instead of Marginal.  :func:`build_witness` exposes every
constructor by name together with the verdicts it is expected to produce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateV, InputError, PatternViolation
from .numeric import HermitianMatrix, Kind, encode_matrix, positivity_verdict
from .transforms import fh_exponent_status, FhStatus, is_natural

EPS_GRID = np.geomspace(1e-6, 1.0, 13)


def _check_v(v, n):
    v = np.asarray(v, dtype=float)
    if v.shape != (n,):
        raise InputError(f"v must have {n} entries")
    if np.any(v <= 0):
        raise InputError("v must be strictly positive")
    if len(np.unique(v)) != n:
        raise DegenerateV("v must have pairwise distinct entries")
    return v


def default_v(n: int) -> np.ndarray:
    return np.arange(1, n + 1) / n


# ---------------------------------------------------------------- FH family


def fitzgerald_horn_matrix(n: int, eps: float, a: float = 1.0) -> HermitianMatrix:
    """``a * (1 + eps*i*j)`` for 1 <= i, j <= n; PSD of rank at most 2."""
    if n < 2:
        raise InputError("n must be >= 2")
    if eps < 0 or a <= 0:
        raise InputError("need eps >= 0 and a > 0")
    idx = np.arange(1, n + 1, dtype=float)
    A = a * (1.0 + eps * np.outer(idx, idx))
    return HermitianMatrix(A, exact_singular=(n >= 3 or eps == 0))


@dataclass(frozen=True)
class FhScan:
    beta: float
    n: int
    eps_found: float | None
    best_eps: float
    best_relative_min_eig: float
    relative_min_eigs: tuple


def fh_scan(n: int, beta: float, grid=None, a: float = 1.0, threshold: float = 1e-8) -> FhScan:
    """Scan ``(a(1 + eps*i*j))**beta`` over ``grid`` for a clearly negative eigenvalue.

    The smallest eigenvalue is divided by ``max(1, spectral radius)``.
    ``eps_found`` is the grid value with the most negative ratio when it is
    below ``-threshold``, otherwise None.
    """
    grid = EPS_GRID if grid is None else np.asarray(grid, dtype=float)
    rel = []
    for eps in grid:
        P = fitzgerald_horn_matrix(n, float(eps), a).entries.real ** beta
        eigs = np.linalg.eigvalsh(P)
        rel.append(float(eigs[0] / max(1.0, np.max(np.abs(eigs)))))
    k = int(np.argmin(rel))
    found = float(grid[k]) if rel[k] < -threshold else None
    return FhScan(beta, n, found, float(grid[k]), rel[k], tuple(rel))


# ---------------------------------------------------------------- rank-deficient sums


def vandermonde_sum_matrix(n: int, a: float = 1.0, eps: float = 0.1, v=None,
                           cap: float | None = None) -> HermitianMatrix:
    """``a * (1 + eps * sum_{i=1}^{n-2} v^{oi} (v^{oi})^T)``, PSD of rank n - 1.

    ``cap`` (an upper bound on ``b/a`` for an interval ``(a, b)``) is checked
    against ``1 + eps*(n-2)*max(v)**(2(n-2))`` when given.
    """
    if n < 3:
        raise InputError("n must be >= 3")
    if a <= 0 or eps <= 0:
        raise InputError("need a > 0 and eps > 0")
    v = _check_v(default_v(n) if v is None else v, n)
    if cap is not None:
        top = 1.0 + eps * (n - 2) * float(np.max(v)) ** (2 * (n - 2))
        if not 1.0 < top < cap:
            raise InputError(f"entry cap violated: 1 + eps(n-2)max(v)^(2(n-2)) = {top} not < {cap}")
    S = np.ones((n, n))
    for i in range(1, n - 1):
        w = v ** i
        S = S + eps * np.outer(w, w)
    return HermitianMatrix(a * S, exact_singular=True)


def rank_one_perturb_matrix(n: int, a: float = 1.0, eps: float = 0.1, v=None) -> HermitianMatrix:
    """``a * (1 + eps**2 * v_i v_j)``, PSD of rank 2."""
    if n < 2:
        raise InputError("n must be >= 2")
    if a <= 0 or eps <= 0:
        raise InputError("need a > 0 and eps > 0")
    v = _check_v(default_v(n) if v is None else v, n)
    return HermitianMatrix(a * (1.0 + eps ** 2 * np.outer(v, v)), exact_singular=n > 2)


# ---------------------------------------------------------------- extensions


def extend(A, x="duplicate") -> HermitianMatrix:
    """Border ``A`` by its last row: ``[[A, v^*], [v, x]]``.

    With ``x="duplicate"`` the new corner equals the old one, so the last two
    rows coincide and the result is singular.  In general
    ``det = (x - a_nn) * det A``.
    """
    M = A.entries if isinstance(A, HermitianMatrix) else np.asarray(A, dtype=complex)
    n = M.shape[0]
    dup = isinstance(x, str)
    if dup and x != "duplicate":
        raise InputError("x must be a real number or 'duplicate'")
    corner = M[-1, -1].real if dup else float(x)
    E = np.empty((n + 1, n + 1), dtype=complex)
    E[:n, :n] = M
    E[n, :n] = M[-1, :]
    E[:n, n] = M[:, -1]
    E[n, n] = corner
    return HermitianMatrix(E, exact_singular=dup)


# ---------------------------------------------------------------- 2x2 test matrices

TEST_KINDS = ("A", "B", "C", "D", "B2", "B2-variant")


def test_matrix_2x2(kind: str, **p):
    """The 2x2 test matrices; A and C are returned as plain (possibly non-Hermitian) arrays.

    A(z, w, eps) = [[|z|+eps, z], [w, |z|]]
    B(a, eps)    = [[a, |a|], [|a|, |a|+eps]]
    C(z, w, u, eps) = [[|z|+eps, z], [w, u]]
    D(x, y, eps) = [[x, sqrt(xy)+eps], [sqrt(xy)+eps, y]]
    B2(u, eps)   = [[u, u-eps], [u-eps, u-3eps]]; the variant uses u-2eps.
    """
    eps = float(p.get("eps", 0.0))
    if eps < 0:
        raise InputError("eps must be >= 0")
    if kind == "A":
        z, w = complex(p["z"]), complex(p["w"])
        return np.array([[abs(z) + eps, z], [w, abs(z)]], dtype=complex)
    if kind == "C":
        z, w, u = complex(p["z"]), complex(p["w"]), float(p["u"])
        return np.array([[abs(z) + eps, z], [w, u]], dtype=complex)
    if kind == "B":
        a = float(p["a"])
        return HermitianMatrix(np.array([[a, abs(a)], [abs(a), abs(a) + eps]]),
                               exact_singular=(eps == 0 and a >= 0))
    if kind == "D":
        x, y = float(p["x"]), float(p["y"])
        if x < 0 or y < 0:
            raise InputError("D needs x, y >= 0")
        s = math.sqrt(x * y) + eps
        return HermitianMatrix(np.array([[x, s], [s, y]]), exact_singular=eps == 0)
    if kind in ("B2", "B2-variant"):
        u = float(p["u"])
        k = 3 if kind == "B2" else 2
        return HermitianMatrix(np.array([[u, u - eps], [u - eps, u - k * eps]]),
                               exact_singular=eps == 0)
    raise InputError(f"unknown test matrix kind {kind!r}; known: {TEST_KINDS}")


test_matrix_2x2.__test__ = False  # not a pytest test despite the name


# ---------------------------------------------------------------- cycles


def tridiagonal_T(k: int, R: float = 1.0) -> HermitianMatrix:
    """Tridiagonal k x k matrix with 2R on the diagonal and R beside it."""
    if k < 1 or R <= 0:
        raise InputError("need k >= 1 and R > 0")
    T = 2 * R * np.eye(k) + R * (np.eye(k, k=1) + np.eye(k, k=-1))
    return HermitianMatrix(T)


def tridiagonal_facts(k: int, R: float = 1.0) -> dict:
    """Closed forms: determinant and the corner entries of the inverse."""
    return {"det": (k + 1) * R ** k, "inv11": k / (R * (k + 1)),
            "inv1k": (-1) ** (k + 1) / (R * (k + 1))}


@dataclass(frozen=True)
class CycleWitness:
    """``Lambda = [[T, v], [v^*, lam]]`` with ``v = (a, 0, ..., 0, b)``."""

    n: int
    R: float
    off_a: complex
    off_b: complex
    eps: float
    lam: float
    matrix: HermitianMatrix = field(repr=False)

    def shell(self, a: complex, b: complex) -> HermitianMatrix:
        """Same T and corner with the two off-diagonal entries replaced by (a, b)."""
        return _lambda_matrix(self.n, self.R, a, b, self.lam)

    def schur_closed_form(self, a: complex | None = None, b: complex | None = None) -> float:
        a = self.off_a if a is None else a
        b = self.off_b if b is None else b
        n, R = self.n, self.R
        sgn = (-1) ** n
        return sgn * (2 / (R * n)) * ((self.off_a * np.conj(self.off_b)).real
                                      - (a * np.conj(b)).real + sgn * self.eps)

    def predicts_indefinite(self, a: complex, b: complex) -> bool:
        base = (self.off_a * np.conj(self.off_b)).real
        val = (a * np.conj(b)).real
        if self.n % 2:
            return val < base - self.eps
        return val > base + self.eps


def _lambda_matrix(n, R, a, b, lam) -> HermitianMatrix:
    L = np.zeros((n, n), dtype=complex)
    L[: n - 1, : n - 1] = tridiagonal_T(n - 1, R).entries
    L[0, n - 1] = a
    L[n - 2, n - 1] += b
    L[n - 1, 0] = np.conj(a)
    L[n - 1, n - 2] += np.conj(b)
    L[n - 1, n - 1] = lam
    return HermitianMatrix(L)


def cycle_witness(n: int, R: float, off_a: complex, off_b: complex, eps: float) -> CycleWitness:
    """PD cycle-patterned matrix whose positivity detects ``Re(a conj b)`` to within ``eps``."""
    if n < 3:
        raise InputError("n must be >= 3")
    if R <= 0 or eps <= 0:
        raise InputError("need R > 0 and eps > 0")
    off_a, off_b = complex(off_a), complex(off_b)
    if off_a == 0 or off_b == 0:
        raise InputError("off-diagonal entries must be nonzero")
    r1, r2 = abs(off_a), abs(off_b)
    sgn = (-1) ** n
    lam = ((n - 1) * (r1 ** 2 + r2 ** 2) / (R * n)
           + sgn * (2 / (R * n)) * ((off_a * np.conj(off_b)).real + sgn * eps))
    return CycleWitness(n, R, off_a, off_b, eps, lam, _lambda_matrix(n, R, off_a, off_b, lam))


# ---------------------------------------------------------------- path batteries


def beta_gate(x: float) -> HermitianMatrix:
    """``[[1, x, 0], [x, 1, x], [0, x, 1]]`` with ``det = 1 - 2x^2``."""
    return HermitianMatrix(np.array([[1, x, 0], [x, 1, x], [0, x, 1]], dtype=float))


def subadditive_matrix(x: float, y: float) -> HermitianMatrix:
    """``[[x+y, x, y], [x, x, 0], [y, 0, y]]``, singular PSD for x, y > 0."""
    if x <= 0 or y <= 0:
        raise InputError("need x, y > 0")
    return HermitianMatrix(np.array([[x + y, x, y], [x, x, 0], [y, 0, y]], dtype=float),
                           exact_singular=True)


def unbounded_matrix(t: float) -> HermitianMatrix:
    """``[[3t, t, t], [t, t, 0], [t, 0, t]]``, PD with determinant ``t^3``."""
    if t <= 0:
        raise InputError("need t > 0")
    return HermitianMatrix(np.array([[3 * t, t, t], [t, t, 0], [t, 0, t]], dtype=float))


def extension_pad(adj: np.ndarray, S, A, eps: float) -> HermitianMatrix:
    """Embed ``A`` (on vertex list ``S``) into a graph-patterned matrix of the full graph.

    Remaining vertices get 1 on the diagonal; every graph edge touching a
    remaining vertex gets ``eps``.  ``adj`` is the boolean adjacency matrix.
    """
    adj = np.asarray(adj, dtype=bool)
    n = adj.shape[0]
    S = list(S)
    M_A = A.entries if isinstance(A, HermitianMatrix) else np.asarray(A, dtype=complex)
    sub = adj[np.ix_(S, S)]
    off = ~np.eye(len(S), dtype=bool)
    if np.any((M_A != 0) & off & ~sub):
        raise PatternViolation("A has a nonzero entry on a non-edge of the induced subgraph")
    rest = [v for v in range(n) if v not in S]
    order = S + rest
    M = np.where(adj, eps, 0.0).astype(complex)
    np.fill_diagonal(M, 1.0)
    P = M[np.ix_(order, order)]
    P[: len(S), : len(S)] = M_A
    inv = np.argsort(order)
    return HermitianMatrix(P[np.ix_(inv, inv)])


# ---------------------------------------------------------------- 3x3 identities


def g_function(p: float, q: float, r: float) -> float:
    if min(p, q, r) <= 0:
        raise InputError("need p, q, r > 0")
    return (p * p + q * q + r * r - 1) / (2 * p * q * r)


def three_by_three_det(a, b, c, x, y, z) -> float:
    """``abc - a|z|^2 - b|y|^2 - c|x|^2 + 2 Re(x conj(y) z)``."""
    x, y, z = complex(x), complex(y), complex(z)
    return float(a * b * c - a * abs(z) ** 2 - b * abs(y) ** 2 - c * abs(x) ** 2
                 + 2 * (x * y.conjugate() * z).real)


def three_by_three(a, b, c, x, y, z) -> HermitianMatrix:
    """``[[a, x, y], [conj x, b, z], [conj y, conj z, c]]``."""
    x, y, z = complex(x), complex(y), complex(z)
    return HermitianMatrix(np.array([[a, x, y], [x.conjugate(), b, z],
                                     [y.conjugate(), z.conjugate(), c]], dtype=complex))


# ---------------------------------------------------------------- registry


@dataclass(frozen=True)
class WitnessSpec:
    """A named construction with the verdicts it is expected to produce.

    ``predicted_pre`` / ``predicted_post`` are tuples of allowed verdict kinds
    (None when no prediction is made); ``post_transform`` names the transform
    the post prediction refers to.
    """

    name: str
    params: dict
    predicted_pre: tuple | None
    predicted_post: tuple | None = None
    post_transform: str | None = None

    def to_dict(self) -> dict:
        return {"name": self.name, "params": _jsonable(self.params),
                "predictedVerdictPre": list(self.predicted_pre) if self.predicted_pre else None,
                "predictedVerdictPost": list(self.predicted_post) if self.predicted_post else None,
                "postTransform": self.post_transform}


def _jsonable(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if isinstance(v, complex):
            out[k] = [v.real, v.imag]
        elif isinstance(v, np.ndarray):
            out[k] = v.tolist()
        elif isinstance(v, tuple):
            out[k] = list(v)
        else:
            out[k] = v
    return out


PD, SING, IND = Kind.PD.value, Kind.SINGULAR.value, Kind.INDEFINITE.value
MARG = Kind.MARGINAL.value


def _kind_2x2(M: np.ndarray) -> tuple:
    """Verdict of a Hermitian 2x2 from its closed-form determinant and trace."""
    a, d = M[0, 0].real, M[1, 1].real
    det = a * d - abs(M[0, 1]) ** 2
    if det > 0 and a > 0:
        return (PD,)
    if det < 0:
        return (IND,)
    if det == 0 and a >= 0 and d >= 0:
        return (SING, MARG)
    return (IND,)


def _power_image(M: HermitianMatrix, beta: float) -> np.ndarray:
    return np.sign(M.entries.real) * np.abs(M.entries.real) ** beta


def build_witness(name: str, params: dict):
    """Construct a named witness.  Returns ``(matrix, WitnessSpec, extras)``."""
    p = dict(params)
    beta = p.get("beta")
    extras: dict = {}
    post = None
    if name == "fitzgerald-horn":
        n, eps, a = int(p.get("n", 3)), float(p.get("eps", 0.1)), float(p.get("a", 1.0))
        M = fitzgerald_horn_matrix(n, eps, a)
        pre = (PD,) if (n == 2 and eps > 0) else (SING, MARG)
        if beta is not None:
            status = fh_exponent_status(n, float(beta))
            extras["fhStatus"] = status.value
            if status is FhStatus.NON_PRESERVER:
                scan = fh_scan(n, float(beta), a=a)
                extras["epsFound"] = scan.eps_found
                extras["relativeMinEigenvalue"] = scan.best_relative_min_eig
    elif name == "vandermonde-sum":
        n = int(p.get("n", 3))
        v = _vec(p.get("v"))
        M = vandermonde_sum_matrix(n, float(p.get("a", 1.0)), float(p.get("eps", 0.1)), v,
                                   p.get("cap"))
        pre = (SING, MARG)
        if beta is not None and is_natural(float(beta)) and float(beta) >= 2:
            post = (PD,)
    elif name == "rank-one-perturb":
        n = int(p.get("n", 3))
        M = rank_one_perturb_matrix(n, float(p.get("a", 1.0)), float(p.get("eps", 0.1)),
                                    _vec(p.get("v")))
        pre = (PD,) if n == 2 else (SING, MARG)
        if beta is not None:
            b = float(beta)
            if b > n - 2 and not is_natural(b):
                post = (PD,)
            elif b == 1:
                post = pre
    elif name == "extend":
        A = HermitianMatrix(np.asarray(p["A"], dtype=complex))
        x = p.get("x", "duplicate")
        M = extend(A, x)
        pre = None
        extras["det"] = float(np.linalg.det(M.entries).real)
        if not isinstance(x, str):
            extras["predictedDet"] = (float(x) - A.entries[-1, -1].real) * float(np.linalg.det(A.entries).real)
    elif name == "test-matrix-2x2":
        kind = str(p.pop("kind", "A"))
        M = test_matrix_2x2(kind, **p)
        arr = M.entries if isinstance(M, HermitianMatrix) else M
        extras["det"] = complex(arr[0, 0] * arr[1, 1] - arr[0, 1] * arr[1, 0]).real
        pre = _kind_2x2(arr) if isinstance(M, HermitianMatrix) else None
    elif name == "tridiagonal-T":
        k, R = int(p.get("k", 3)), float(p.get("R", 1.0))
        M = tridiagonal_T(k, R)
        pre = (PD,)
        extras.update(tridiagonal_facts(k, R))
    elif name == "cycle-witness":
        W = cycle_witness(int(p.get("n", 3)), float(p.get("R", 1.0)), complex(p.get("offA", 1)),
                          complex(p.get("offB", 1)), float(p.get("eps", 0.1)))
        extras["lambdaNN"] = W.lam
        extras["schurClosedForm"] = W.schur_closed_form()
        if "a" in p and "b" in p:
            a, b = complex(p["a"]), complex(p["b"])
            M = W.shell(a, b)
            extras["schurClosedForm"] = W.schur_closed_form(a, b)
            pre = (IND,) if W.predicts_indefinite(a, b) else None
        else:
            M = W.matrix
            pre = (PD,)
    elif name in ("beta-gate", "subadditive", "unbounded"):
        if name == "beta-gate":
            x = float(p.get("x", 0.75))
            M = beta_gate(x)
            d = 1 - 2 * x * x
            pre = (PD,) if (d > 0 and abs(x) < 1) else (IND,) if d < 0 else (MARG,)
            extras["det"] = d
            if beta is not None:
                dp = 1 - 2 * abs(x) ** (2 * float(beta))
                extras["postDet"] = dp
                post = (PD,) if dp > 0 else (IND,)
        elif name == "subadditive":
            M = subadditive_matrix(float(p.get("x", 1.0)), float(p.get("y", 1.0)))
            pre = (SING,)
        else:
            M = unbounded_matrix(float(p.get("t", p.get("n", 1.0))))
            pre = (PD,)
    elif name == "three-by-three":
        args = [p.get(k, 1.0) for k in ("a", "b", "c", "x", "y", "z")]
        M = three_by_three(*[float(t) for t in args[:3]], *[complex(t) for t in args[3:]])
        extras["det"] = three_by_three_det(*[float(t) for t in args[:3]], *[complex(t) for t in args[3:]])
        pre = None
    else:
        raise InputError(f"unknown witness {name!r}; known: {WITNESS_NAMES}")
    if beta is not None and post is None and isinstance(M, HermitianMatrix) and np.all(M.entries.imag == 0):
        extras["postVerdict"] = positivity_verdict(_power_image(M, float(beta))).to_dict()
    spec = WitnessSpec(name, params, pre, post, f"power-sign beta={beta}" if beta is not None else None)
    return M, spec, extras


WITNESS_NAMES = ("fitzgerald-horn", "vandermonde-sum", "rank-one-perturb", "extend",
                 "test-matrix-2x2", "tridiagonal-T", "cycle-witness", "beta-gate",
                 "subadditive", "unbounded", "three-by-three")


def _vec(v):
    if v is None:
        return None
    if isinstance(v, str):
        return np.array([float(t) for t in v.split(";")])
    return np.asarray(v, dtype=float)


def witness_json(M, spec: WitnessSpec, extras: dict) -> dict:
    arr = M.entries if isinstance(M, HermitianMatrix) else np.asarray(M)
    out = {"witness": spec.to_dict(), "matrix": encode_matrix(arr), "extras": extras}
    if isinstance(M, HermitianMatrix):
        out["verdict"] = positivity_verdict(M).to_dict()
    return out
