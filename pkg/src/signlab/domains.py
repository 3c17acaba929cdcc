"""Subsets of the complex plane built from a few primitive regions.

A :class:`DomainSpec` is a finite union of pieces (real intervals, annuli,
polar rectangles, finite point sets, real half-lines).  Membership is exact
per primitive.  The structural predicates used by the preserver theorems
(reflection symmetry, modulus closure, pd/psd type) reduce to comparisons of
endpoints and their open/closed flags, with no numerics involved.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExhausted, InputError
from .numeric import DEFAULT_TOL, HermitianMatrix, classify, Kind

INF = math.inf
# Sampling window used for unbounded primitives.
WINDOW = 4.0


@dataclass(frozen=True)
class Interval:
    """Real interval with explicit endpoint closure; infinite ends are open."""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if math.isinf(self.lo):
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(self.hi):
            object.__setattr__(self, "hi_closed", False)

    @property
    def empty(self) -> bool:
        return self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed))

    @property
    def degenerate(self) -> bool:
        return not self.empty and self.lo == self.hi

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        above = (x >= self.lo) if self.lo_closed else (x > self.lo)
        below = (x <= self.hi) if self.hi_closed else (x < self.hi)
        return above & below

    def subset_of(self, other: "Interval") -> bool:
        if self.empty:
            return True
        lo_ok = self.lo > other.lo or (self.lo == other.lo and (other.lo_closed or not self.lo_closed))
        hi_ok = self.hi < other.hi or (self.hi == other.hi and (other.hi_closed or not self.hi_closed))
        return lo_ok and hi_ok

    def negated(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.hi_closed, self.lo_closed)

    def window(self, span: float = WINDOW) -> tuple[float, float]:
        lo, hi = self.lo, self.hi
        if math.isinf(lo) and math.isinf(hi):
            return -span, span
        if math.isinf(lo):
            return hi - span, hi
        if math.isinf(hi):
            return lo, lo + span
        return lo, hi

    def sample(self, rng, size) -> np.ndarray:
        lo, hi = self.window()
        if lo == hi:
            return np.full(size, lo)
        x = rng.uniform(lo, hi, size)
        # Open endpoints are hit with probability zero, but clamp the rounding case.
        bad = ~self.contains(x)
        if np.any(bad):
            x[bad] = (lo + hi) / 2
        return x


def merge_intervals(intervals) -> list[Interval]:
    items = sorted((iv for iv in intervals if not iv.empty), key=lambda iv: (iv.lo, not iv.lo_closed))
    merged: list[Interval] = []
    for iv in items:
        if merged:
            last = merged[-1]
            touches = iv.lo < last.hi or (iv.lo == last.hi and (iv.lo_closed or last.hi_closed))
            if touches:
                if iv.hi > last.hi or (iv.hi == last.hi and iv.hi_closed):
                    merged[-1] = Interval(last.lo, iv.hi, last.lo_closed, iv.hi_closed or (iv.hi == last.hi and last.hi_closed))
                continue
        merged.append(iv)
    return merged


@dataclass(frozen=True)
class ModulusRange:
    """Range of |z| over a set, with attainment of the extremes."""

    inf: float
    inf_attained: bool
    sup: float
    sup_attained: bool


def _num(x, default):
    return default if x is None else float(x)


@dataclass(frozen=True)
class RealInterval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True
    kind = "real-interval"

    @property
    def iv(self) -> Interval:
        return Interval(self.lo, self.hi, self.lo_closed, self.hi_closed)

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        return (z.imag == 0) & self.iv.contains(z.real)

    def nonneg_part(self):
        iv = self.iv
        if iv.hi < 0 or (iv.hi == 0 and not iv.hi_closed):
            return []
        if iv.lo >= 0:
            return [iv]
        return [Interval(0.0, iv.hi, True, iv.hi_closed)]

    def real_part(self):
        return [self.iv]

    def off_axis_modulus(self):
        iv = self.iv
        if iv.empty or iv.lo >= 0:
            return None
        sup, sup_att = -iv.lo, iv.lo_closed
        if iv.hi < 0:
            inf, inf_att = -iv.hi, iv.hi_closed
        else:
            inf, inf_att = 0.0, False
        return ModulusRange(inf, inf_att, sup, sup_att)

    def modulus_image(self):
        iv = self.iv
        if iv.empty:
            return []
        if iv.lo >= 0:
            return [iv]
        if iv.hi <= 0:
            return [iv.negated()]
        a, b = -iv.lo, iv.hi
        if a > b:
            closed = iv.lo_closed
        elif b > a:
            closed = iv.hi_closed
        else:
            closed = iv.lo_closed or iv.hi_closed
        return [Interval(0.0, max(a, b), True, closed)]

    def reflected(self):
        return self

    def sample(self, rng, size):
        return self.iv.sample(rng, size).astype(complex)

    def to_json(self):
        return {"kind": self.kind, "lo": _enc(self.lo), "hi": _enc(self.hi),
                "loClosed": self.lo_closed, "hiClosed": self.hi_closed}


@dataclass(frozen=True)
class Annulus:
    """``{z : |z| in radial interval}``; ``r_lo = 0`` gives a disk."""

    r_lo: float
    r_hi: float
    lo_closed: bool = True
    hi_closed: bool = True
    kind = "annulus"

    def __post_init__(self):
        if self.r_lo < 0:
            raise InputError("annulus radii must be nonnegative")

    @property
    def radial(self) -> Interval:
        return Interval(self.r_lo, self.r_hi, self.lo_closed, self.hi_closed)

    def contains(self, z):
        return self.radial.contains(np.abs(np.asarray(z, dtype=complex)))

    def nonneg_part(self):
        return [self.radial]

    def real_part(self):
        return [self.radial, self.radial.negated()]

    def off_axis_modulus(self):
        rad = self.radial
        if rad.empty or (rad.degenerate and rad.lo == 0):
            return None
        return ModulusRange(rad.lo, rad.lo_closed and rad.lo > 0, rad.hi, rad.hi_closed)

    def modulus_image(self):
        return [self.radial]

    def reflected(self):
        return self

    def sample(self, rng, size):
        r = self.radial.sample(rng, size)
        return r * np.exp(1j * rng.uniform(-np.pi, np.pi, size))

    def to_json(self):
        return {"kind": self.kind, "rLo": _enc(self.r_lo), "rHi": _enc(self.r_hi),
                "loClosed": self.lo_closed, "hiClosed": self.hi_closed}


@dataclass(frozen=True)
class PolarRectangle:
    """``{r e^{i t} : r in radial interval, theta_lo <= t <= theta_hi}``, angles in [-pi, pi]."""

    r_lo: float
    r_hi: float
    theta_lo: float
    theta_hi: float
    lo_closed: bool = True
    hi_closed: bool = True
    kind = "polar-rectangle"

    def __post_init__(self):
        if not (-math.pi <= self.theta_lo <= self.theta_hi <= math.pi):
            raise InputError("polar rectangle needs -pi <= theta_lo <= theta_hi <= pi")
        if self.r_lo < 0:
            raise InputError("radii must be nonnegative")

    @property
    def radial(self) -> Interval:
        return Interval(self.r_lo, self.r_hi, self.lo_closed, self.hi_closed)

    def _angle_ok(self, ang):
        ok = (ang >= self.theta_lo) & (ang <= self.theta_hi)
        if self.theta_lo == -math.pi:
            ok |= ang == math.pi
        return ok

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        in_r = self.radial.contains(r)
        return in_r & (self._angle_ok(np.angle(z)) | (r == 0))

    def _has_angle(self, t):
        return bool(self._angle_ok(np.asarray(t)))

    def nonneg_part(self):
        if self._has_angle(0.0):
            return [self.radial]
        if self.radial.contains(0.0):
            return [Interval(0.0, 0.0)]
        return []

    def real_part(self):
        parts = self.nonneg_part()
        if self._has_angle(math.pi):
            parts.append(self.radial.negated())
        return parts

    def off_axis_modulus(self):
        rad = self.radial
        if rad.empty or (self.theta_lo == 0 == self.theta_hi):
            return None
        if rad.degenerate and rad.lo == 0:
            return None
        return ModulusRange(rad.lo, rad.lo_closed and rad.lo > 0, rad.hi, rad.hi_closed)

    def modulus_image(self):
        return [self.radial]

    def reflected(self):
        return PolarRectangle(self.r_lo, self.r_hi, -self.theta_hi, -self.theta_lo,
                              self.lo_closed, self.hi_closed)

    def sample(self, rng, size):
        r = self.radial.sample(rng, size)
        return r * np.exp(1j * rng.uniform(self.theta_lo, self.theta_hi, size))

    def to_json(self):
        return {"kind": self.kind, "rLo": _enc(self.r_lo), "rHi": _enc(self.r_hi),
                "thetaLo": self.theta_lo, "thetaHi": self.theta_hi,
                "loClosed": self.lo_closed, "hiClosed": self.hi_closed}


@dataclass(frozen=True)
class PointSet:
    points: tuple
    kind = "finite-point-set"

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(complex(p) for p in self.points))
        if not self.points:
            raise InputError("point set must be nonempty")

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=bool)
        for p in self.points:
            out |= z == p
        return out

    def nonneg_part(self):
        return [Interval(p.real, p.real) for p in self.points if p.imag == 0 and p.real >= 0]

    def real_part(self):
        return [Interval(p.real, p.real) for p in self.points if p.imag == 0]

    def off_axis_modulus(self):
        mods = [abs(p) for p in self.points if not (p.imag == 0 and p.real >= 0)]
        if not mods:
            return None
        return ModulusRange(min(mods), True, max(mods), True)

    def modulus_image(self):
        return [Interval(abs(p), abs(p)) for p in self.points]

    def reflected(self):
        return PointSet(tuple(p.conjugate() for p in self.points))

    def sample(self, rng, size):
        pts = np.array(self.points, dtype=complex)
        return pts[rng.integers(0, len(pts), size)]

    def to_json(self):
        return {"kind": self.kind, "points": [[p.real, p.imag] for p in self.points]}


def HalfLine(sign: int, lo: float, closed: bool = True) -> RealInterval:
    """Real half-line: ``[lo, inf)`` for sign=+1, ``(-inf, lo]`` for sign=-1."""
    if sign > 0:
        return RealInterval(lo, INF, closed, False)
    return RealInterval(-INF, lo, False, closed)


def _enc(x):
    if math.isinf(x):
        return None
    return x


@dataclass(frozen=True)
class StructuralFlags:
    reflection_symmetric: bool
    modulus_closed: bool
    pd_type: bool
    psd_type: bool
    i_is_interval: bool

    def to_dict(self):
        return {"reflectionSymmetric": self.reflection_symmetric,
                "modulusClosed": self.modulus_closed, "pdType": self.pd_type,
                "psdType": self.psd_type, "iIsInterval": self.i_is_interval}


def _covers(q, p) -> bool:
    """Whether the single piece q contains the whole piece p (supported cases)."""
    if q == p:
        return True
    if isinstance(p, PointSet):
        return bool(np.all(q.contains(np.array(p.points))))
    if isinstance(p, PolarRectangle):
        if isinstance(q, Annulus):
            return p.radial.subset_of(q.radial)
        if isinstance(q, PolarRectangle):
            return (p.radial.subset_of(q.radial) and q.theta_lo <= p.theta_lo
                    and p.theta_hi <= q.theta_hi)
    if isinstance(p, RealInterval):
        if isinstance(q, RealInterval):
            return p.iv.subset_of(q.iv)
    return False


@dataclass(frozen=True)
class DomainSpec:
    pieces: tuple
    flags: StructuralFlags = field(init=False, compare=False, repr=False)
    nonneg: tuple = field(init=False, compare=False, repr=False)
    reals: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        pieces = tuple(self.pieces)
        if not pieces:
            raise InputError("domain needs at least one piece")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "nonneg", tuple(merge_intervals(
            iv for p in pieces for iv in p.nonneg_part())))
        object.__setattr__(self, "reals", tuple(merge_intervals(
            iv for p in pieces for iv in p.real_part())))
        object.__setattr__(self, "flags", self._compute_flags())

    # -- membership ---------------------------------------------------------
    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=bool)
        for p in self.pieces:
            out |= p.contains(z)
        return out

    def contains_point(self, z) -> bool:
        return bool(self.contains(complex(z)))

    @property
    def is_real(self) -> bool:
        """True when every piece lies on the real axis."""
        for p in self.pieces:
            if isinstance(p, RealInterval):
                continue
            if isinstance(p, PointSet) and all(q.imag == 0 for q in p.points):
                continue
            return False
        return True

    @property
    def sup_nonneg(self) -> float:
        return self.nonneg[-1].hi if self.nonneg else -INF

    @property
    def inf_nonneg(self) -> float:
        return self.nonneg[0].lo if self.nonneg else INF

    def positive_interval(self) -> Interval | None:
        """Longest nondegenerate component of ``Omega ∩ (0, inf)``."""
        best = None
        for iv in self.nonneg:
            if iv.degenerate:
                continue
            lo = iv.lo
            cand = Interval(lo, iv.hi, iv.lo_closed and lo > 0, iv.hi_closed)
            if best is None or (cand.hi - cand.lo) > (best.hi - best.lo):
                best = cand
        return best

    # -- structural predicates ---------------------------------------------
    def _compute_flags(self) -> StructuralFlags:
        refl = all(any(_covers(q, p.reflected()) for q in self.pieces) for p in self.pieces)
        modc = all(any(iv.subset_of(c) for c in self.nonneg)
                   for p in self.pieces for iv in p.modulus_image() if not iv.empty)
        ranges = [r for r in (p.off_axis_modulus() for p in self.pieces) if r is not None]
        if not ranges:
            pd = psd = True
        elif not self.nonneg:
            pd = psd = False
        else:
            sup_i, inf_i = self.sup_nonneg, self.inf_nonneg
            pd = all(r.sup < sup_i if r.sup_attained else r.sup <= sup_i for r in ranges)
            psd = all(r.inf > inf_i if r.inf_attained else r.inf >= inf_i for r in ranges)
        return StructuralFlags(refl, modc, pd, psd, len(self.nonneg) == 1)

    def structural_flags(self) -> StructuralFlags:
        return self.flags

    def reflected(self) -> "DomainSpec":
        return DomainSpec(tuple(p.reflected() for p in self.pieces))

    # -- sampling -----------------------------------------------------------
    def sample(self, rng, size) -> np.ndarray:
        size = tuple(np.atleast_1d(size))
        total = int(np.prod(size))
        which = rng.integers(0, len(self.pieces), total)
        out = np.empty(total, dtype=complex)
        for k, p in enumerate(self.pieces):
            idx = np.flatnonzero(which == k)
            if idx.size:
                out[idx] = p.sample(rng, idx.size)
        return out.reshape(size)

    def sample_real(self, rng, size, positive_bias: float = 0.85) -> np.ndarray:
        """Reals from ``Omega ∩ R``, drawn from ``Omega ∩ [0, inf)`` with probability ``positive_bias``."""
        size = tuple(np.atleast_1d(size))
        total = int(np.prod(size))
        if not self.reals:
            raise InputError("domain contains no real numbers")
        pos = self.nonneg if self.nonneg else self.reals
        use_pos = rng.uniform(size=total) < positive_bias
        out = np.empty(total)
        for pool, mask in ((pos, use_pos), (self.reals, ~use_pos)):
            idx = np.flatnonzero(mask)
            if not idx.size:
                continue
            which = rng.integers(0, len(pool), idx.size)
            for k, iv in enumerate(pool):
                sel = idx[which == k]
                if sel.size:
                    out[sel] = iv.sample(rng, sel.size)
        return out.reshape(size)

    # -- serialization --------------------------------------------------------
    def to_json(self) -> dict:
        return {"pieces": [p.to_json() for p in self.pieces]}

    @classmethod
    def from_json(cls, obj) -> "DomainSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            return cls(tuple(_piece_from_json(p) for p in obj["pieces"]))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad domain JSON: {exc}") from exc


def _piece_from_json(p: dict):
    kind = p["kind"]
    lo_c, hi_c = p.get("loClosed", True), p.get("hiClosed", True)
    if kind == "real-interval":
        return RealInterval(_num(p.get("lo"), -INF), _num(p.get("hi"), INF), lo_c, hi_c)
    if kind == "annulus":
        return Annulus(_num(p.get("rLo"), 0.0), _num(p.get("rHi"), INF), lo_c, hi_c)
    if kind == "polar-rectangle":
        return PolarRectangle(_num(p.get("rLo"), 0.0), _num(p.get("rHi"), INF),
                              float(p["thetaLo"]), float(p["thetaHi"]), lo_c, hi_c)
    if kind == "finite-point-set":
        return PointSet(tuple(complex(*q) if isinstance(q, (list, tuple)) else complex(q)
                              for q in p["points"]))
    if kind == "half-line":
        return HalfLine(int(p.get("sign", 1)), float(p.get("lo", 0.0)), p.get("closed", True))
    raise InputError(f"unknown piece kind {kind!r}")


REAL_LINE = DomainSpec((RealInterval(-INF, INF),))
COMPLEX_PLANE = DomainSpec((Annulus(0.0, INF),))
POSITIVE_REALS = DomainSpec((RealInterval(0.0, INF, False, False),))
NONNEG_REALS = DomainSpec((RealInterval(0.0, INF, True, False),))

PRESETS = {
    "real-line": REAL_LINE,
    "complex-plane": COMPLEX_PLANE,
    "positive-reals": POSITIVE_REALS,
    "nonneg-reals": NONNEG_REALS,
}


def annulus(r_lo, r_hi, lo_closed=True, hi_closed=True) -> DomainSpec:
    return DomainSpec((Annulus(r_lo, r_hi, lo_closed, hi_closed),))


def parse_domain(text: str) -> DomainSpec:
    """Preset name, ``annulus:lo:hi``, ``interval:lo:hi`` or inline JSON."""
    text = text.strip()
    if text in PRESETS:
        return PRESETS[text]
    if text.startswith("{"):
        return DomainSpec.from_json(text)
    head, _, rest = text.partition(":")
    if head in ("annulus", "interval") and rest:
        try:
            lo, hi = (float(x) for x in rest.split(":"))
        except ValueError:
            raise InputError(f"bad {head} bounds {rest!r}; expected LO:HI") from None
        return annulus(lo, hi) if head == "annulus" else DomainSpec((RealInterval(lo, hi),))
    raise InputError(f"unknown domain {text!r}")


def is_theorem_domain(d: DomainSpec) -> str | None:
    """Name of the matching classified graph domain (R, C, (0, inf)), else None."""
    for name, ref in (("R", REAL_LINE), ("C", COMPLEX_PLANE), ("(0,inf)", POSITIVE_REALS)):
        if d == ref:
            return name
    return None


# -- random Hermitian matrices ------------------------------------------------

MODES = ("pd", "psdSingular", "indefinite", "any")


def sample_hermitian_batch(d: DomainSpec, n: int, size: int, rng, targets=None,
                           pattern=None) -> tuple[np.ndarray, np.ndarray]:
    """A stack of Hermitian matrices with entries in ``d``.

    ``targets`` holds one desired smallest eigenvalue per matrix, relative to
    ``max(1, spectral radius)`` of the unshifted draw (NaN for no adjustment);
    the diagonal is shifted to reach it whenever the shifted diagonal stays
    inside ``Omega ∩ R``.  ``pattern`` is an optional boolean n x n mask of
    allowed off-diagonal positions.  Returns the stack and a mask of matrices
    whose entries all lie in the domain.
    """
    iu = np.triu_indices(n, 1)
    A = np.zeros((size, n, n), dtype=complex)
    if iu[0].size:
        off = d.sample(rng, (size, iu[0].size))
        if pattern is not None:
            off = off * np.asarray(pattern)[iu]
        A[:, iu[0], iu[1]] = off
        A[:, iu[1], iu[0]] = np.conj(off)
    diag = d.sample_real(rng, (size, n))
    idx = np.arange(n)
    A[:, idx, idx] = diag
    if targets is not None:
        targets = np.asarray(targets, dtype=float)
        lmin, scale = _spectra(A)
        goal = targets * np.maximum(1.0, scale)
        shift = np.where(np.isnan(targets), 0.0, goal - lmin)
        moved = diag + shift[:, None]
        ok = np.all(d.contains(moved.astype(complex)), axis=1) & ~np.isnan(targets)
        sel = np.flatnonzero(ok)
        if sel.size:
            A[sel[:, None], idx, idx] = moved[sel]
    valid = _entries_valid(d, A, pattern)
    return A, valid


def _entries_valid(d: DomainSpec, A: np.ndarray, pattern=None) -> np.ndarray:
    inside = d.contains(A)
    if pattern is not None:
        n = A.shape[-1]
        structural = ~np.asarray(pattern, dtype=bool) & ~np.eye(n, dtype=bool)
        inside = inside | (structural & (A == 0))
    return np.all(inside, axis=(-2, -1))


def sample_hermitian(d: DomainSpec, n: int, mode: str = "any", seed: int = 0,
                     tol: float = DEFAULT_TOL, attempts: int = 400, pattern=None) -> HermitianMatrix:
    """One Hermitian matrix over ``d`` whose verdict matches ``mode``.

    Diagonal entries come from ``Omega ∩ R``; the diagonal is loaded toward
    the requested smallest eigenvalue.  Raises :class:`BudgetExhausted` when no
    match is found within ``attempts`` draws.
    """
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}")
    if n < 1:
        raise InputError("n must be >= 1")
    rng = np.random.default_rng(seed)
    batch = 32
    for _ in range(max(1, attempts // batch)):
        delta = rng.uniform(0.05, 0.5, batch)
        targets = {"pd": delta, "indefinite": -delta, "psdSingular": np.zeros(batch),
                   "any": np.full(batch, np.nan)}[mode]
        stack, valid = sample_hermitian_batch(d, n, batch, rng, targets=targets, pattern=pattern)
        lmin, scale = _spectra(stack)
        for k in range(batch):
            if not valid[k]:
                continue
            kind = classify(lmin[k], scale[k], tol)
            if _matches(kind, mode):
                return HermitianMatrix(stack[k])
    raise BudgetExhausted(f"no {mode} matrix over the domain after {attempts} attempts")


def _spectra(stack):
    eigs = np.linalg.eigvalsh(stack)
    return eigs[:, 0], np.max(np.abs(eigs), axis=1)


def _matches(kind: Kind, mode: str) -> bool:
    if mode == "any":
        return True
    if mode == "pd":
        return kind is Kind.PD
    if mode == "indefinite":
        return kind is Kind.INDEFINITE
    return kind in (Kind.MARGINAL, Kind.SINGULAR)
