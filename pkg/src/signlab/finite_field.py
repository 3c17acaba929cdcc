"""Finite fields F_p and F_{p^2}, positivity over them, and exhaustive search
for entrywise sign preservers of symmetric matrices.

Elements are stored as integers ``0 .. q-1`` encoding the coefficient vector
``c_0 + c_1 p`` of ``c_0 + c_1 x`` modulo the defining polynomial.  All
arithmetic goes through precomputed q x q tables, so everything is exact.

An element is positive when it is the square of a nonzero element, and a
symmetric matrix is positive definite when all its leading principal minors
are positive.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BudgetExceeded, InputError

# Exhaustive enumeration limits: at most 7^7 functions and 7^6 symmetric matrices.
MAX_FUNCTIONS = 7 ** 7
MAX_MATRICES = 7 ** 6

BUILTIN_MODULI = {(2, 2): (1, 1, 1), (3, 2): (1, 0, 1)}  # x^2+x+1 over F_2, x^2+1 over F_3


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def _has_root(poly, p) -> bool:
    return any(sum(c * pow(x, i, p) for i, c in enumerate(poly)) % p == 0 for x in range(p))


def default_modulus(p: int) -> tuple:
    """The built-in polynomial if there is one, else the first monic irreducible x^2 + b x + c."""
    if (p, 2) in BUILTIN_MODULI:
        return BUILTIN_MODULI[(p, 2)]
    for c in range(1, p):
        for b in range(p):
            if not _has_root((c, b, 1), p):
                return (c, b, 1)
    raise AssertionError("no irreducible quadratic found")  # pragma: no cover


@dataclass(frozen=True)
class FqField:
    """The field F_q, q = p^k with k in {1, 2}.

    ``modulus`` lists the coefficients of the monic defining polynomial from
    the constant term up (only used for k = 2).
    """

    p: int
    k: int = 1
    modulus: tuple | None = None
    tables: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not _is_prime(self.p):
            raise InputError(f"p = {self.p} is not prime")
        if self.k not in (1, 2):
            raise InputError("only prime fields and quadratic extensions are supported")
        mod = self.modulus
        if self.k == 2:
            mod = tuple(int(c) % self.p for c in (mod if mod is not None else default_modulus(self.p)))
            if len(mod) != 3 or mod[2] != 1:
                raise InputError("the modulus must be a monic quadratic (c0, c1, 1)")
            # A quadratic is irreducible iff it has no root.
            if _has_root(mod, self.p):
                raise InputError(f"x^2 + {mod[1]}x + {mod[0]} is reducible over F_{self.p}")
        else:
            mod = None
        object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "tables", self._build_tables())
        if self.q <= 9:
            self.check_axioms()

    @property
    def q(self) -> int:
        return self.p ** self.k

    def coeffs(self, x: int) -> tuple:
        return (x % self.p, x // self.p) if self.k == 2 else (x,)

    def element(self, coeffs) -> int:
        cs = [int(c) % self.p for c in coeffs]
        if len(cs) != self.k:
            raise InputError(f"need {self.k} coefficients")
        return cs[0] + (cs[1] * self.p if self.k == 2 else 0)

    def _build_tables(self) -> dict:
        p, q = self.p, self.q
        xs = np.arange(q)
        c0, c1 = (xs % p, xs // p) if self.k == 2 else (xs, np.zeros(q, dtype=int))
        add = ((c0[:, None] + c0[None, :]) % p) + p * ((c1[:, None] + c1[None, :]) % p) * (self.k == 2)
        if self.k == 1:
            mul = (xs[:, None] * xs[None, :]) % p
        else:
            m0, m1 = self.modulus[0], self.modulus[1]
            # (a0 + a1 x)(b0 + b1 x) with x^2 = -m1 x - m0
            t0 = c0[:, None] * c0[None, :]
            t1 = c0[:, None] * c1[None, :] + c1[:, None] * c0[None, :]
            t2 = c1[:, None] * c1[None, :]
            r0 = (t0 - m0 * t2) % p
            r1 = (t1 - m1 * t2) % p
            mul = r0 + p * r1
        neg = np.array([int(np.flatnonzero(add[x] == 0)[0]) for x in range(q)])
        inv = np.zeros(q, dtype=int)
        for x in range(1, q):
            inv[x] = int(np.flatnonzero(mul[x] == 1)[0])
        sub = add[:, neg]
        squares = np.zeros(q, dtype=bool)
        squares[np.unique(mul[xs[1:], xs[1:]])] = True
        return {"add": add.astype(np.int64), "mul": mul.astype(np.int64), "neg": neg, "inv": inv,
                "sub": sub.astype(np.int64), "positive": squares}

    def check_axioms(self):
        """Exhaustive associativity, commutativity and distributivity checks."""
        a, m = self.tables["add"], self.tables["mul"]
        x = np.arange(self.q)
        X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
        ok = (np.array_equal(a, a.T) and np.array_equal(m, m.T)
              and np.array_equal(a[a[X, Y], Z], a[X, a[Y, Z]])
              and np.array_equal(m[m[X, Y], Z], m[X, m[Y, Z]])
              and np.array_equal(m[X, a[Y, Z]], a[m[X, Y], m[X, Z]])
              and np.all(m[1] == x) and np.all(a[0] == x))
        if not ok:
            raise InputError("tables violate the field axioms")  # pragma: no cover

    def pow(self, x: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = int(self.tables["mul"][r, x])
        return r

    @cached_property
    def positives(self) -> tuple:
        return tuple(int(v) for v in np.flatnonzero(self.tables["positive"]))


def field_of_order(q: int) -> FqField:
    """Field of order q (prime or the square of a prime) with the default modulus."""
    for p in range(2, q + 1):
        if _is_prime(p):
            if p == q:
                return FqField(p, 1)
            if p * p == q:
                return FqField(p, 2)
    raise InputError(f"no supported field of order {q}")


# ------------------------------------------------------------ positivity


def is_positive(F: FqField, x: int) -> bool:
    return bool(F.tables["positive"][int(x)])


def _check_symmetric(M) -> np.ndarray:
    arr = np.asarray(M, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputError("expected a square matrix")
    if not np.array_equal(arr, arr.T):
        raise InputError("matrix is not symmetric")
    return arr


def _pd_stack(F: FqField, stack: np.ndarray) -> np.ndarray:
    """PD flags for a stack of symmetric matrices.

    Elimination without pivoting: the k-th leading minor is the product of the
    first k pivots, so a zero pivot means a zero (non-positive) minor and the
    matrix is not PD.
    """
    t = F.tables
    A = stack.astype(np.int64).copy()
    N, n, _ = A.shape
    ok = np.ones(N, dtype=bool)
    minor = np.ones(N, dtype=np.int64)
    for j in range(n):
        piv = A[:, j, j]
        minor = t["mul"][minor, piv]
        ok &= t["positive"][minor]
        pinv = t["inv"][piv]  # inv[0] = 0 keeps the arithmetic defined on dead rows
        for i in range(j + 1, n):
            factor = t["mul"][A[:, i, j], pinv]
            A[:, i, j:] = t["sub"][A[:, i, j:], t["mul"][factor[:, None], A[:, j, j:]]]
    return ok


def is_positive_definite(F: FqField, M) -> bool:
    arr = _check_symmetric(M)
    if np.any((arr < 0) | (arr >= F.q)):
        raise InputError("entries must be field elements 0..q-1")
    return bool(_pd_stack(F, arr[None])[0])


def determinant(F: FqField, M) -> int:
    """Exact determinant by Gaussian elimination with row pivoting."""
    t = F.tables
    A = np.asarray(M, dtype=np.int64).copy()
    n = A.shape[0]
    det = 1
    for j in range(n):
        rows = np.flatnonzero(A[j:, j]) + j
        if rows.size == 0:
            return 0
        r = int(rows[0])
        if r != j:
            A[[j, r]] = A[[r, j]]
            det = int(t["neg"][det])
        piv = int(A[j, j])
        det = int(t["mul"][det, piv])
        pinv = int(t["inv"][piv])
        for i in range(j + 1, n):
            factor = int(t["mul"][A[i, j], pinv])
            A[i, j:] = t["sub"][A[i, j:], t["mul"][factor, A[j, j:]]]
    return det


def leading_minors(F: FqField, M) -> list[int]:
    arr = np.asarray(M, dtype=np.int64)
    return [determinant(F, arr[:k, :k]) for k in range(1, arr.shape[0] + 1)]


# ------------------------------------------------------------ automorphisms


def frobenius_orbit(F: FqField) -> list[tuple]:
    """Value tables of x -> x^(p^i), i = 0..k-1 (all automorphisms of F_q)."""
    return [tuple(F.pow(x, F.p ** i) if x else 0 for x in range(F.q)) for i in range(F.k)]


def positive_multiples_of_automorphisms(F: FqField) -> set:
    mul = F.tables["mul"]
    return {tuple(int(mul[c, s]) for s in sigma) for c in F.positives for sigma in frobenius_orbit(F)}


def bijective_monomials(F: FqField) -> set:
    """Value tables of c x^d with c != 0 and gcd(d, q-1) = 1."""
    q = F.q
    mul = F.tables["mul"]
    out = set()
    for d in range(1, q):
        if math.gcd(d, q - 1) != 1:
            continue
        mono = [F.pow(x, d) if x else 0 for x in range(q)]
        for c in range(1, q):
            out.add(tuple(int(mul[c, y]) for y in mono))
    return out


def theorem_scope(F: FqField, n: int) -> str | None:
    """Which known classification covers (F, n), or None when none does."""
    if n == 2:
        return "bijective monomials" if F.p == 2 else "positive multiples of automorphisms"
    if n >= 3 and F.p != 2:
        return "positive multiples of automorphisms"
    return None


# ------------------------------------------------------------ enumeration


def check_budget(F: FqField, n: int):
    m = n * (n + 1) // 2
    if n < 1:
        raise InputError("n must be >= 1")
    if F.q ** F.q > MAX_FUNCTIONS or F.q ** m > MAX_MATRICES:
        raise BudgetExceeded(
            f"exhaustive search over F_{F.q}, n={n} needs {F.q}^{F.q} functions and "
            f"{F.q}^{m} matrices; limits are {MAX_FUNCTIONS} and {MAX_MATRICES}")


@dataclass(frozen=True)
class MatrixSpace:
    """All symmetric n x n matrices over F, encoded by their upper-triangle digits."""

    F: FqField
    n: int

    @cached_property
    def positions(self):
        return np.triu_indices(self.n)

    @cached_property
    def digits(self) -> np.ndarray:
        m = len(self.positions[0])
        idx = np.arange(self.F.q ** m)
        return np.stack([(idx // self.F.q ** k) % self.F.q for k in range(m)], axis=1)

    @cached_property
    def weights(self) -> np.ndarray:
        return self.F.q ** np.arange(len(self.positions[0]), dtype=np.int64)

    def matrices(self, rows) -> np.ndarray:
        d = self.digits[rows]
        M = np.zeros((len(d), self.n, self.n), dtype=np.int64)
        i, j = self.positions
        M[:, i, j] = d
        M[:, j, i] = d
        return M

    @cached_property
    def pd(self) -> np.ndarray:
        out = np.empty(len(self.digits), dtype=bool)
        step = 1 << 15
        for s in range(0, len(out), step):
            rows = np.arange(s, min(len(out), s + step))
            out[rows] = _pd_stack(self.F, self.matrices(rows))
        return out


def _function_tables(q: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    return np.stack([(idx // q ** x) % q for x in range(q)], axis=1)


def discriminating_order(space: MatrixSpace, probes: int = 64, seed: int = 0) -> np.ndarray:
    """Matrix indices sorted by how many random probe functions each one kills."""
    q = space.F.q
    rng = np.random.default_rng(seed)
    probe = rng.integers(0, q, (probes, q))
    kills = np.zeros(len(space.digits), dtype=np.int64)
    step = 1 << 14
    for s in range(0, len(kills), step):
        rows = slice(s, min(len(kills), s + step))
        img = probe[:, space.digits[rows]] @ space.weights  # (probes, rows)
        kills[rows] = (space.pd[img] != space.pd[rows][None, :]).sum(axis=0)
    return np.argsort(-kills, kind="stable")


def _survivors(space: MatrixSpace, order: np.ndarray, start: int, stop: int, chunk: int = 1 << 16):
    q, m = space.F.q, len(space.weights)
    pd_sorted = space.pd[order]
    dig_sorted = space.digits[order]
    found = []
    for s in range(start, stop, chunk):
        tables = _function_tables(q, s, min(stop, s + chunk))
        alive = np.arange(len(tables))
        pos = 0
        while alive.size and pos < len(order):
            b = int(min(len(order) - pos, max(8, (1 << 21) // max(1, alive.size * m))))
            img = tables[alive][:, dig_sorted[pos:pos + b]] @ space.weights
            bad = (space.pd[img] != pd_sorted[None, pos:pos + b]).any(axis=1)
            alive = alive[~bad]
            pos += b
        found.extend(int(s + a) for a in alive)
    return found


def enumerate_sign_preservers(F: FqField, n: int, workers: int = 1) -> list[tuple]:
    """All f: F_q -> F_q with ``M`` PD iff ``f[M]`` PD for every symmetric n x n M.

    Exhaustive over the q^q functions.  Each function is tested against the
    matrices in decreasing order of how many random functions they rule out, so
    most functions are rejected after a few lookups.  Survivors are returned as
    value tables ``(f(0), ..., f(q-1))`` in increasing index order.
    """
    check_budget(F, n)
    space = MatrixSpace(F, n)
    order = discriminating_order(space)
    total = F.q ** F.q
    workers = max(1, int(workers))
    bounds = np.linspace(0, total, workers + 1).astype(np.int64)
    ranges = [(int(bounds[i]), int(bounds[i + 1])) for i in range(workers)]
    if workers == 1:
        parts = [_survivors(space, order, *ranges[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda r: _survivors(space, order, *r), ranges))
    idx = sorted(i for part in parts for i in part)
    return [tuple(int((i // F.q ** x) % F.q) for x in range(F.q)) for i in idx]
