"""Falsification engines for entrywise sign preservation.

:func:`find_counterexample` first runs targeted batteries (explicit matrices
known to separate preservers from non-preservers), then falls back to batched
random sampling.  A counterexample needs both the input and the image verdict
outside the Marginal band, so rounding near the PSD boundary never produces
one.  The absence of a counterexample is reported as NotFalsified, which
is evidence and not a proof.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import witnesses as W
from .domains import DomainSpec, sample_hermitian_batch
from .errors import DegenerateDomain, EvalError, InputError
from .numeric import (DEFAULT_TOL, HermitianMatrix, batch_exact_singular, batch_hermitian,
                      batch_spectra, loewner_compare, positivity_verdict)
from .reports import (Construction, Outcome, PairWitness, VerdictReport, WitnessReport,
                      builder, direction_for, rebuild)
from .transforms import (EntrywiseFn, FhPower, PowerSign, apply_entrywise,
                         apply_entrywise_graph, apply_entrywise_stack, apply_graph_stack,
                         fh_exponent_status, FhStatus, is_natural)

DEFAULT_BUDGET = 100_000
DEFAULT_SEED = 0xC0FFEE
BATCH_SIZE = 1024


def _c(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


# ------------------------------------------------------------ base builders


@builder("beta-gate")
def _b_beta_gate(p, ctx):
    return W.beta_gate(float(p["x"])).entries, False


@builder("fitzgerald-horn")
def _b_fh(p, ctx):
    M = W.fitzgerald_horn_matrix(int(p["n"]), float(p["eps"]), float(p["a"]))
    return M.entries, M.exact_singular


@builder("vandermonde-sum")
def _b_vdm(p, ctx):
    M = W.vandermonde_sum_matrix(int(p["n"]), float(p["a"]), float(p["eps"]), p.get("v"))
    return M.entries, True


@builder("rank-one-perturb")
def _b_rank_one(p, ctx):
    M = W.rank_one_perturb_matrix(int(p["n"]), float(p["a"]), float(p["eps"]), p.get("v"))
    return M.entries, M.exact_singular


@builder("boundary-2x2")
def _b_boundary(p, ctx):
    """``[[x, s], [conj s, y]]``; singular by construction when ``exactSingular``."""
    x, y, s = float(p["x"]), float(p["y"]), _c(p["s"])
    return np.array([[x, s], [s.conjugate(), y]], dtype=complex), bool(p.get("exactSingular", False))


@builder("test-2x2")
def _b_test(p, ctx):
    q = {k: (_c(v) if k in ("z", "w") else v) for k, v in p.items() if k != "kind"}
    M = W.test_matrix_2x2(p["kind"], **q)
    if isinstance(M, HermitianMatrix):
        return M.entries, M.exact_singular
    return M, False


@builder("multiplicativity")
def _b_mult(p, ctx):
    rho, eps = float(p["rho"]), float(p["eps"])
    X, Z = _c(p["X"]), _c(p["Z"])
    d = rho * (1 + eps)
    M = W.three_by_three(d, d, d, rho * X, rho * X * Z, rho * Z)
    return M.entries, eps == 0


@builder("g-battery")
def _b_g(p, ctx):
    rho, s, Z = float(p["rho"]), float(p["s"]), _c(p["Z"])
    return W.three_by_three(rho, rho, rho, rho * s, rho * s, rho * s * Z).entries, False


@builder("random")
def _b_random(p, ctx):
    d = ctx.get("domainSpec")
    if d is None:
        raise InputError("random constructions need the domain in the context")
    adj = ctx.get("adjacency")
    adj = None if adj is None else np.asarray(adj, dtype=bool)
    stack, _ = random_batch(d, int(p["n"]), int(p["seed"]), int(p["batch"]), int(p["size"]), adj)
    return stack[int(p["index"])], False


def random_batch(d: DomainSpec, n: int, seed: int, batch: int, size: int, adj=None):
    """Deterministic batch ``batch`` of the random phase (independent of worker count).

    A quarter of the draws are loaded toward a small positive smallest
    eigenvalue, a quarter toward a small negative one, a quarter are left as
    drawn and a quarter get a moderate positive margin.  Margins are
    log-uniform in [1e-7, 1] relative to the spectral radius.
    """
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), int(batch)]))
    t = np.exp(rng.uniform(np.log(1e-7), 0.0, size))
    cls = np.arange(size) % 4
    targets = np.where(cls == 0, t, np.where(cls == 1, -t, np.where(cls == 2, np.nan, 0.5 * t ** 0.25)))
    return sample_hermitian_batch(d, n, size, rng, targets=targets, pattern=adj)


# ------------------------------------------------------------ candidate checks


@dataclass
class Stats:
    checks: dict = field(default_factory=dict)
    skipped: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.checks.values())

    def count(self, strategy, k=1):
        self.checks[strategy] = self.checks.get(strategy, 0) + k

    def skip(self, reason, k=1):
        if k:
            self.skipped[reason] = self.skipped.get(reason, 0) + k


def _in_domain(d: DomainSpec, M: np.ndarray, adj=None) -> bool:
    inside = d.contains(M)
    if adj is not None:
        inside = inside | ((~adj & ~np.eye(len(adj), dtype=bool)) & (M == 0))
    return bool(np.all(inside))


def examine(f: EntrywiseFn, M, stamp: bool, post_stamp: bool, mode: str, tol: float,
            adj=None, forward_only: bool = False):
    """Compare the verdicts of ``M`` and its image.  Returns (status, pre, post, image)."""
    try:
        image = apply_entrywise_graph(f, adj, M) if adj is not None else apply_entrywise(f, M)
    except EvalError:
        return "evalError", None, None, None
    pre = positivity_verdict(M, tol, exact_singular=stamp)
    post = positivity_verdict(image, tol, exact_singular=post_stamp)
    a, b = pre.positive(mode), post.positive(mode)
    if a is None or b is None:
        return "marginal", pre, post, image
    if a == b or (forward_only and not a):
        return "agree", pre, post, image
    return "witness", pre, post, image


def _report(M, image, pre, post, cons, mode, strategy) -> WitnessReport:
    return WitnessReport(np.asarray(M), np.asarray(image), pre, post, cons,
                         direction_for(mode, pre.positive(mode), post.hermitian), mode, strategy)


def run_candidates(f, d, mode, tol, candidates, stats: Stats, budget: int, ctx: dict,
                   adj=None, forward_only=False):
    """Check (strategy, Construction) pairs in order; first confirmed witness wins."""
    for strategy, cons in candidates:
        if stats.total >= budget:
            return None
        try:
            M, stamp, post_stamp = rebuild(cons, ctx)
        except InputError:
            stats.skip("invalidConstruction")
            continue
        if not _in_domain(d, M, adj):
            stats.skip("outOfDomain")
            continue
        if adj is not None and np.any((M != 0) & ~adj & ~np.eye(len(adj), dtype=bool)):
            stats.skip("patternViolation")
            continue
        stats.count(strategy)
        status, pre, post, image = examine(f, M, stamp, post_stamp, mode, tol, adj, forward_only)
        if status == "witness":
            return _report(M, image, pre, post, cons, mode, strategy)
        if status != "agree":
            stats.skip(status)
    return None


def _batch_verdicts(stack, tol, mode="pd"):
    """Masks (positive in ``mode``, decidedly not positive) for a stack."""
    lmin, scale = batch_spectra(stack)
    band = tol * np.maximum(1.0, scale)
    pos, neg = lmin > band, lmin < -band
    exact = batch_exact_singular(stack) & ~pos & ~neg
    if mode == "pd":
        neg = neg | exact
    else:
        pos = pos | exact
    return pos, neg


def run_random_phase(f, d, n, mode, tol, stats: Stats, budget: int, seed: int, workers: int = 1,
                     adj=None, forward_only=False, size: int = BATCH_SIZE, ctx=None):
    """Batched random search; the lowest (batch, index) witness wins."""
    remaining = budget - stats.total
    if remaining <= 0:
        return None
    n_batches = math.ceil(remaining / size)

    def one(b):
        stack, valid = random_batch(d, n, seed, b, size, adj)
        if adj is not None:
            image, finite = apply_graph_stack(f, adj, stack)
        else:
            image, finite = apply_entrywise_stack(f, stack)
        eval_bad = valid & ~finite
        ok = valid & finite
        pre_pos, pre_neg = _batch_verdicts(stack, tol, mode)
        herm = batch_hermitian(np.where(ok[:, None, None], image, 0), tol)
        sym = np.where(ok[:, None, None], (image + np.conj(np.swapaxes(image, -1, -2))) / 2, 0)
        post_pos, post_neg = _batch_verdicts(sym, tol, mode)
        post_pos &= herm
        post_dec = post_pos | post_neg | ~herm
        pre_dec = pre_pos | pre_neg
        decided = ok & pre_dec & post_dec
        hit = decided & (pre_pos != post_pos)
        if forward_only:
            hit &= pre_pos
        idx = np.flatnonzero(hit)
        return (int(ok.sum()), int((ok & ~decided).sum()), int(eval_bad.sum()), int((~valid).sum()),
                int(idx[0]) if idx.size else None)

    b = 0
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        while b < n_batches:
            chunk = list(range(b, min(n_batches, b + max(1, workers))))
            results = list(pool.map(one, chunk)) if workers > 1 else [one(k) for k in chunk]
            for k, (checked, marginal, evalerr, outside, hit) in zip(chunk, results):
                if hit is not None:
                    stats.count("random", hit + 1)
                    cons = Construction("random", {"seed": int(seed), "batch": k, "index": hit,
                                                   "size": size, "n": n})
                    M, _, _ = rebuild(cons, ctx)
                    status, pre, post, image = examine(f, M, False, False, mode, tol, adj, forward_only)
                    if status == "witness":
                        return _report(M, image, pre, post, cons, mode, "random")
                    stats.skip("batchMismatch")
                    continue
                stats.count("random", checked)
                stats.skip("marginal", marginal)
                stats.skip("evalError", evalerr)
                stats.skip("outOfDomain", outside)
            b += len(chunk)
            if stats.total >= budget:
                break
    return None


# ------------------------------------------------------------ targeted batteries


def working_range(d: DomainSpec):
    """A base value ``a`` inside ``Omega ∩ (0, inf)`` and a ceiling ``b`` for targeted entries."""
    P = d.positive_interval()
    if P is None:
        return None
    lo, hi = P.lo, P.hi
    if math.isinf(hi):
        a = 1.0 if lo < 1.0 else 2.0 * lo
        return a, math.inf
    width = hi - lo
    a = lo + 0.1 * width if lo > 0 else 0.1 * hi
    if P.lo < 1.0 < P.hi and lo + 0.1 * width <= 1.0 <= hi - 0.3 * width:
        a = 1.0
    return a, hi - 0.01 * width


def _lift(cons, k, mode):
    """Grow a construction by k border extensions."""
    out = []
    if k == 0:
        return [cons]
    rel = cons
    for _ in range(k):
        rel = rel.then("extend", "rel", 0.05)
    out.append(rel)
    if mode == "psd":
        dup = cons
        for _ in range(k):
            dup = dup.then("extend", "duplicate")
        out.append(dup)
    return out


def beta_gate_battery(d, n, mode, a):
    if n < 3 or not d.contains_point(0):
        return
    xs = sorted(set(np.round(np.linspace(0.05, 0.95, 19), 2).tolist()) | {0.75})
    for x in xs:
        cons = Construction("beta-gate", {"x": x})
        if a != 1.0:
            cons = cons.then("scale", a)
        if n > 3:
            cons = cons.then("sum-identity", n - 3, a)
        yield "beta-gate", cons


def fh_battery(d, n, mode, a, b):
    if n < 3:
        return
    for eps in W.EPS_GRID:
        if a * (1 + eps * n * n) * (1 + 1e-3) > b:
            continue
        base = Construction("fitzgerald-horn", {"n": n, "eps": float(eps), "a": a})
        if mode == "psd":
            yield "fitzgerald-horn", base
        for g in (1e-7, 1e-5, 1e-3):
            yield "fitzgerald-horn+loading", base.then("shift", g * a)


def _sum_battery(name, strategy, epss, d, n, mode, a, b, top):
    if n < 3:
        return
    for eps in epss:
        if a * top(eps) > b:
            continue
        base = Construction(name, {"n": n, "a": a, "eps": eps})
        if mode == "pd":
            yield strategy, base
        else:
            for eta in (1e-6, 1e-5, 1e-4):
                yield strategy, base.then("shift", -eta * a * n)


def vandermonde_battery(d, n, mode, a, b):
    v_max = 1.0
    yield from _sum_battery("vandermonde-sum", "vandermonde-sum", (0.05, 0.1, 0.3, 0.6, 1.0), d, n, mode,
                            a, b, lambda e: 1 + e * (n - 2) * v_max ** (2 * (n - 2)))


def rank_one_battery(d, n, mode, a, b):
    yield from _sum_battery("rank-one-perturb", "rank-one-perturb", (0.3, 0.6, 1.0), d, n, mode,
                            a, b, lambda e: 1 + e * e)


def _grid_points(d, a, b):
    pts = {a}
    if math.isinf(b):
        pts |= {2.0 * a, 3.7 * a, 0.5 * a}
    else:
        pts |= {math.sqrt(a * b), b}
    return sorted(p for p in pts if d.contains_point(p))


def two_by_two_battery(d, n, mode, a, b):
    pts = _grid_points(d, a, b)
    phases = [1.0]
    if d.contains_point(-a):
        phases.append(-1.0)
    if not d.is_real:
        phases += [complex(math.cos(t), math.sin(t)) for t in (math.pi / 3, 2.3, -0.9)]
    for x in pts:
        for y in pts:
            r = math.sqrt(x * y)
            for ph in phases:
                for delta in (0.0, -1e-2, 1e-2, -1e-4, 1e-4):
                    s = complex(ph) * r * (1 + delta)
                    cons = Construction("boundary-2x2", {"x": x, "y": y, "s": s,
                                                         "exactSingular": delta == 0.0})
                    for c in _lift(cons, n - 2, mode):
                        yield "2x2-boundary", c


def _circle_radius(d):
    for rho in (1.0, 0.75, 1.5, 0.5, 2.0):
        angles = np.linspace(-np.pi, np.pi, 25)
        if np.all(d.contains(rho * np.exp(1j * angles))) and d.contains_point(rho * 1.01):
            return rho
    return None


ANGLES = (0.3, 0.7, 1.1, 1.6, 2.2, 2.9, -0.5, -1.3, -2.6)


def multiplicativity_battery(d, n, mode):
    if n < 3 or d.is_real:
        return
    rho = _circle_radius(d)
    if rho is None:
        return
    for eps in (1e-2, 1e-3) + ((0.0,) if mode == "psd" else ()):
        for tx in ANGLES:
            for tz in ANGLES:
                X, Z = complex(math.cos(tx), math.sin(tx)), complex(math.cos(tz), math.sin(tz))
                cons = Construction("multiplicativity", {"rho": rho, "eps": eps, "X": X, "Z": Z})
                for c in _lift(cons, n - 3, mode):
                    yield "multiplicativity", c


def _g_diag(s):
    return (3 * s * s - 1) / (2 * s ** 3)


def g_battery(f, d, n, mode):
    if n < 3 or d.is_real:
        return
    rho = _circle_radius(d)
    if rho is None:
        return
    lo_s = 1e-3
    for phi in np.linspace(0.15, np.pi - 0.15, 24):
        Z = complex(math.cos(phi), math.sin(phi))
        t = Z.real
        for _ in range(2):
            target = t
            if not _g_diag(lo_s) < target < 1:
                break
            s = brentq(lambda q: _g_diag(q) - target, lo_s, 1.0)
            w = f.scalar(rho * s * Z)
            if not np.isfinite(w) or w == 0:
                break
            u = w.real / abs(w)
            if abs(u - Z.real) < 1e-6:
                break
            t = 0.5 * (u + Z.real)
        else:
            if _g_diag(lo_s) < t < 1:
                s = brentq(lambda q: _g_diag(q) - t, lo_s, 1.0)
                cons = Construction("g-battery", {"rho": rho, "s": float(s), "Z": Z})
                for c in _lift(cons, n - 3, mode):
                    yield "g-battery", c


def targeted_candidates(f: EntrywiseFn, d: DomainSpec, n: int, mode: str):
    """Targeted constructions, the ones matched to f's family first."""
    rng_ab = working_range(d)
    meta = f.meta
    groups = []
    if rng_ab is not None:
        a, b = rng_ab
        gate = beta_gate_battery(d, n, mode, a)
        fh = fh_battery(d, n, mode, a, b)
        vdm = vandermonde_battery(d, n, mode, a, b)
        r1 = rank_one_battery(d, n, mode, a, b)
        two = two_by_two_battery(d, n, mode, a, b)
        if isinstance(meta, (PowerSign, FhPower)) and not is_natural(meta.beta):
            if fh_exponent_status(max(n, 2), meta.beta) is FhStatus.NON_PRESERVER:
                groups += [gate, fh, r1, vdm, two]
            else:
                groups += [gate, r1, fh, vdm, two]
        elif isinstance(meta, (PowerSign, FhPower)):
            groups += [gate, vdm, fh, r1, two]
        else:
            groups += [two, gate, fh, vdm, r1]
    groups += [multiplicativity_battery(d, n, mode), g_battery(f, d, n, mode)]
    for g in groups:
        yield from g


# ------------------------------------------------------------ public API


def _context(f, d, n, mode, budget, seed, tol, **extra):
    ctx = {"fn": f.spec, "domain": d.to_json(), "n": n, "mode": mode, "budget": budget,
           "seed": seed, "tolerance": tol}
    ctx.update(extra)
    return ctx


def _check_mode(mode):
    if mode not in ("pd", "psd"):
        raise InputError("mode must be 'pd' or 'psd'")


def find_counterexample(f: EntrywiseFn, d: DomainSpec, n: int, mode: str = "pd",
                        budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED,
                        tol: float = DEFAULT_TOL, workers: int = 1, forward_only: bool = False,
                        stats: Stats | None = None):
    """Search for A in M_n(d) whose positivity differs from that of f[A].

    Both implications are checked unless ``forward_only``.  Returns a
    :class:`WitnessReport` or None.
    """
    _check_mode(mode)
    if n < 1:
        raise InputError("n must be >= 1")
    stats = Stats() if stats is None else stats
    ctx = {"domainSpec": d}
    w = run_candidates(f, d, mode, tol, targeted_candidates(f, d, n, mode), stats, budget, ctx,
                       forward_only=forward_only)
    if w is None:
        w = run_random_phase(f, d, n, mode, tol, stats, budget, seed, workers,
                             forward_only=forward_only, ctx=ctx)
    return w


def verify_sign_preserver(f: EntrywiseFn, d: DomainSpec, n: int, mode: str = "pd",
                          budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED,
                          tol: float = DEFAULT_TOL, workers: int = 1) -> VerdictReport:
    stats = Stats()
    w = find_counterexample(f, d, n, mode, budget, seed, tol, workers, stats=stats)
    outcome = Outcome.FALSIFIED if w is not None else Outcome.NOT_FALSIFIED
    return VerdictReport(outcome, w, stats.checks, stats.skipped,
                         _context(f, d, n, mode, budget, seed, tol))


# ------------------------------------------------------------ injective variant


def _collisions(f, pts, rel=1e-12):
    vals = f(pts)
    fin = np.isfinite(vals)
    pts, vals = pts[fin], vals[fin]
    diff = np.abs(vals[:, None] - vals[None, :])
    scale = np.maximum(1.0, np.abs(vals)[:, None])
    same = (diff <= rel * scale) & (pts[:, None] != pts[None, :])
    i, j = np.nonzero(np.triu(same, 1))
    return [(complex(pts[a]), complex(pts[b])) for a, b in zip(i, j)]


def injectivity_candidates(f, d, seed, n_samples=400):
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 7]))
    pts = [d.sample(rng, n_samples)]
    for p in d.pieces:
        if hasattr(p, "points"):
            pts.append(np.array(p.points, dtype=complex))
    pts = np.concatenate(pts)
    pts = np.unique(np.concatenate([pts, np.conj(pts)]))
    pairs = _collisions(f, pts)
    # A non-real point with a real image collides with its conjugate under equivariance.
    for z in pts[(pts.imag != 0)]:
        w = f.scalar(z)
        if np.isfinite(w) and w.imag == 0:
            pairs.append((complex(z), complex(z.conjugate())))
    for z1, z2 in pairs:
        for u, v in ((z1, z2), (z2, z1)):
            for eps in (0.1, 0.01):
                yield "injectivity-pair", Construction(
                    "test-2x2", {"kind": "A", "z": u, "w": v.conjugate(), "eps": eps * max(abs(u), 1e-3)})


def nonhermitian_candidates(d, seed, count=256):
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 11]))
    zs, ws = d.sample(rng, count), d.sample(rng, count)
    for z, w in zip(zs, ws):
        if w == np.conj(z):
            continue
        yield "nonhermitian-2x2", Construction("test-2x2", {"kind": "A", "z": complex(z), "w": complex(w),
                                                             "eps": 0.1})


def check_injective_variant(f: EntrywiseFn, d: DomainSpec, n: int = 2, mode: str = "pd",
                            budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED,
                            tol: float = DEFAULT_TOL) -> VerdictReport:
    """Sign preservation over all of M_2(d), non-Hermitian matrices included.

    Non-Hermitian inputs are never positive, so their images must not be
    either.  Collisions ``f(z1) = f(z2)`` found among sampled points turn into
    the non-Hermitian test matrix ``A(z1, conj z2, eps)``.
    """
    if n != 2:
        raise InputError("the injective variant is a 2x2 statement (n = 2)")
    _check_mode(mode)
    stats = Stats()
    ctx = {"domainSpec": d}
    w = run_candidates(f, d, mode, tol, injectivity_candidates(f, d, seed), stats, budget, ctx)
    if w is None:
        w = run_candidates(f, d, mode, tol, nonhermitian_candidates(d, seed), stats, budget, ctx)
    if w is None:
        w = find_counterexample(f, d, 2, mode, budget, seed, tol, stats=stats)
    outcome = Outcome.FALSIFIED if w is not None else Outcome.NOT_FALSIFIED
    return VerdictReport(outcome, w, stats.checks, stats.skipped,
                         _context(f, d, 2, mode, budget, seed, tol, variant="injective"))


# ------------------------------------------------------------ classification


@dataclass(frozen=True)
class ClassificationReport:
    alpha_hat: float
    beta_hat: float
    modulus_law_max_rel_err: float
    conj_equivariance_max_err: float
    real_form_max_rel_err: float
    midconvexity_violations: int
    monotonicity_violations: int
    is_power_form: bool
    samples: int

    def to_json(self) -> dict:
        return {"alphaHat": self.alpha_hat, "betaHat": self.beta_hat,
                "modulusLawMaxRelErr": self.modulus_law_max_rel_err,
                "conjEquivarianceMaxErr": self.conj_equivariance_max_err,
                "realFormMaxRelErr": self.real_form_max_rel_err,
                "midconvexityViolations": self.midconvexity_violations,
                "monotonicityViolations": self.monotonicity_violations,
                "isPowerForm": self.is_power_form, "samples": self.samples}


def interior_grid(d: DomainSpec, k: int = 64) -> np.ndarray:
    """k log-spaced points strictly inside the longest component of ``Omega ∩ (0, inf)``."""
    P = d.positive_interval()
    if P is None:
        raise DegenerateDomain("Omega ∩ (0, inf) contains no interval")
    lo, hi = P.lo, P.hi
    if math.isinf(hi):
        lo_g = max(lo * 1.01, 1e-2) if lo > 0 else 1e-2
        hi_g = max(1e2, lo_g * 1e4)
    else:
        w = hi - lo
        lo_g = lo + 0.01 * w if lo > 0 else 1e-3 * hi
        hi_g = hi - 0.01 * w
    return np.geomspace(lo_g, hi_g, k)


def _pair_violations(f, xs, ys, rel=1e-12):
    fx, fy = f(xs), f(ys)
    lo, hi = np.minimum(xs, ys), np.maximum(xs, ys)
    flo, fhi = f(lo), f(hi)
    nonreal = (np.abs(flo.imag) > 0) | (np.abs(fhi.imag) > 0)
    scale = np.maximum(1e-300, np.maximum(np.abs(flo), np.abs(fhi)))
    mono = nonreal | (fhi.real < flo.real - rel * scale) | ~np.isfinite(flo) | ~np.isfinite(fhi)
    gm = f(np.sqrt(xs * ys))
    prod = fx.real * fy.real
    lhs = np.sqrt(np.maximum(prod, 0.0))
    mid = (prod < 0) | (lhs < gm.real - rel * np.maximum(1e-300, np.abs(gm))) | ~np.isfinite(gm)
    return int(mono.sum()), int(mid.sum())


def classify_preserver(f: EntrywiseFn, d: DomainSpec, samples: int = 10_000, seed: int = DEFAULT_SEED,
                       pairs: int = 10_000) -> ClassificationReport:
    """Fit ``alpha |x|^beta`` on a log grid and measure how far f is from that form."""
    grid = interior_grid(d)
    vals = f(grid)
    if np.all(np.isfinite(vals)) and np.all(vals.real > 0) and np.all(vals.imag == 0):
        beta_hat, log_alpha = np.polyfit(np.log(grid), np.log(vals.real), 1)
        alpha_hat = float(np.exp(log_alpha))
        beta_hat = float(beta_hat)
    else:
        alpha_hat = beta_hat = float("nan")
    rng = np.random.default_rng(seed)
    z = d.sample(rng, samples)
    z = z[z != 0]
    fz = f(z)
    model = alpha_hat * np.abs(z) ** beta_hat
    with np.errstate(all="ignore"):
        mod_err = float(np.nanmax(np.abs(np.abs(fz) - model) / model)) if z.size else 0.0
        zc = np.conj(z)
        ok = d.contains(zc)
        conj_err = (float(np.max(np.abs(f(zc[ok]) - np.conj(fz[ok])) / np.maximum(1.0, np.abs(fz[ok]))))
                    if np.any(ok) else 0.0)
        x = d.sample_real(rng, samples)
        x = x[x != 0]
        target = alpha_hat * np.sign(x) * np.abs(x) ** beta_hat
        real_err = (float(np.nanmax(np.abs(f(x) - target) / np.abs(target))) if x.size else 0.0)
    if not np.isfinite(alpha_hat):
        mod_err = real_err = float("inf")
    lo, hi = np.log(grid[0]), np.log(grid[-1])
    xs = np.exp(rng.uniform(lo, hi, pairs))
    ys = np.exp(rng.uniform(lo, hi, pairs))
    mono, mid = _pair_violations(f, xs, ys)
    power = bool(max(mod_err, real_err, conj_err) < 1e-8)
    return ClassificationReport(alpha_hat, beta_hat, mod_err, conj_err, real_err, mid, mono, power, samples)


# ------------------------------------------------------------ Loewner monotonicity


@builder("pair-member")
def _b_pair(p, ctx):
    kind = p["kind"]
    n = int(p["n"])
    if kind == "scalar-identity":
        M = np.zeros((n, n))
        M[:2, :2] = float(p["a"]) * np.eye(2)
        M[2:, 2:] = (1 + float(p.get("delta", 0.0))) * np.eye(n - 2)
        return M.astype(complex), False
    if kind == "ones-pattern":
        M = np.eye(n)
        c = float(p["c"])
        M[:2, :2] = [[1, c], [c, 1]]
        return M.astype(complex), False
    if kind == "gram":
        A, B = gram_pair_batch(n, int(p["seed"]), int(p["batch"]), int(p["size"]))
        return (A if int(p["which"]) == 0 else B)[int(p["index"])].astype(complex), False
    raise InputError(f"unknown pair member {kind!r}")


def gram_pair_batch(n: int, seed: int, batch: int, size: int):
    """Entrywise nonnegative PSD pairs: ``B = X X^T`` and either ``A = B + Y Y^T + t I``
    (so ``A > B``) or an independent Gram matrix ``A = Z Z^T``."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), int(batch), 3]))
    X = rng.exponential(1.0, (size, n, n))
    Z = rng.exponential(1.0, (size, n, n))
    rank = rng.integers(1, n + 1, size)
    Y = rng.exponential(0.5, (size, n, n)) * (np.arange(n)[None, :] < rank[:, None])[:, None, :]
    t = np.exp(rng.uniform(np.log(1e-6), 0.0, size))
    independent = rng.uniform(size=size) < 0.4
    B = X @ np.swapaxes(X, 1, 2)
    A = np.where(independent[:, None, None], Z @ np.swapaxes(Z, 1, 2),
                 B + Y @ np.swapaxes(Y, 1, 2) + t[:, None, None] * np.eye(n))
    return A, B


def monotone_pair_candidates(n):
    """Diagonal versus ones-pattern pairs ``a I`` and ``[[1, c], [c, 1]]``, padded by identities.

    For a power ``x^beta`` the order between them flips at ``a = 1 + c`` while the
    image order flips at ``a^beta = 1 + c^beta``, so one of the two
    implications fails unless beta = 1.
    """
    for c in (1.0, 0.8, 0.5, 0.25):
        for a in np.round(np.linspace(1.05, 3.0, 40), 3):
            yield "diagonal-vs-ones", (
                Construction("pair-member", {"kind": "scalar-identity", "n": n, "a": float(a), "delta": 0.5}),
                Construction("pair-member", {"kind": "ones-pattern", "n": n, "c": c}))


def _pair_check(f, A, B, order, tol):
    """Status of one pair: 'witness', 'agree', 'marginal', 'outside' or 'evalError'."""
    va, vb = positivity_verdict(A, tol), positivity_verdict(B, tol)
    if not (va.positive(order) and vb.positive(order)) or np.any(A.real < 0) or np.any(B.real < 0):
        return "outside", None, None
    try:
        fa, fb = apply_entrywise(f, A), apply_entrywise(f, B)
    except EvalError:
        return "evalError", None, None
    diff = loewner_compare(HermitianMatrix(A), HermitianMatrix(B), tol)
    idiff = positivity_verdict(fa - fb, tol)
    p, q = diff.positive(order), idiff.positive(order)
    if p is None or q is None:
        return "marginal", diff, idiff
    return ("witness" if p != q else "agree"), diff, idiff


def _random_pairs(f, n, order, tol, seed, stats, quota, size=2048):
    """Vectorized random pair phase; lowest (batch, index) wins."""
    batch = 0
    key = f"random-{order}"
    while stats.checks.get(key, 0) < quota:
        A, B = gram_pair_batch(n, seed, batch, size)
        fa, fb = f(A), f(B)
        finite = np.all(np.isfinite(fa), axis=(1, 2)) & np.all(np.isfinite(fb), axis=(1, 2))
        pa_pos, pa_neg = _batch_verdicts(A, tol)
        pb_pos, pb_neg = _batch_verdicts(B, tol)
        member = pa_pos & pb_pos if order == "pd" else ~pa_neg & ~pb_neg
        d_pos, d_neg = _batch_verdicts(A - B, tol, order)
        diff_img = fa - fb
        herm = batch_hermitian(np.where(finite[:, None, None], diff_img, 0), tol)
        sym = np.where(finite[:, None, None], (diff_img + np.conj(np.swapaxes(diff_img, 1, 2))) / 2, 0)
        i_pos, i_neg = _batch_verdicts(sym, tol, order)
        i_pos &= herm
        decided = member & finite & (d_pos | d_neg) & (i_pos | i_neg | ~herm)
        hit = np.flatnonzero(decided & (d_pos != i_pos))
        take = min(size, quota - stats.checks.get(key, 0))
        if hit.size and hit[0] < take:
            k = int(hit[0])
            stats.count(key, k + 1)
            mk = lambda which: Construction("pair-member", {"kind": "gram", "n": n, "seed": int(seed),
                                                            "batch": batch, "index": k, "size": size,
                                                            "which": which})
            ca, cb = mk(0), mk(1)
            Am, _, _ = rebuild(ca)
            Bm, _, _ = rebuild(cb)
            status, diff, idiff = _pair_check(f, Am, Bm, order, tol)
            if status == "witness":
                cons = Construction("pair", {"A": ca.to_json(), "B": cb.to_json()})
                return PairWitness(Am, Bm, diff, idiff, cons, order, key)
            stats.skip("batchMismatch")
        else:
            stats.count(key, take)
            stats.skip("pairOutsideClass", int((~member[:take]).sum()))
            stats.skip("evalError", int((member & ~finite)[:take].sum()))
        batch += 1
    return None


def check_monotone_preserver(f: EntrywiseFn, n: int, budget: int = DEFAULT_BUDGET,
                             seed: int = DEFAULT_SEED, tol: float = DEFAULT_TOL,
                             orders=("psd", "pd")) -> VerdictReport:
    """Test ``f[A] >= f[B] iff A >= B`` (and the strict version) on entrywise nonnegative PSD pairs."""
    if n < 2:
        raise InputError("n must be >= 2")
    stats = Stats()
    witness = None
    per_order = budget // len(orders)
    for order in orders:
        for strategy, (ca, cb) in monotone_pair_candidates(n):
            A, _, _ = rebuild(ca)
            B, _, _ = rebuild(cb)
            stats.count(strategy)
            status, diff, idiff = _pair_check(f, A, B, order, tol)
            if status == "witness":
                cons = Construction("pair", {"A": ca.to_json(), "B": cb.to_json()})
                witness = PairWitness(A, B, diff, idiff, cons, order, strategy)
                break
            if status != "agree":
                stats.skip(status)
        if witness:
            break
        witness = _random_pairs(f, n, order, tol, seed, stats, per_order)
        if witness:
            break
    outcome = Outcome.FALSIFIED if witness else Outcome.NOT_FALSIFIED
    return VerdictReport(outcome, witness, stats.checks, stats.skipped,
                         {"fn": f.spec, "n": n, "budget": budget, "seed": seed, "tolerance": tol,
                          "orders": list(orders), "verb": "monotone"})
