"""End-to-end acceptance checks, one test per criterion.

The terminal summary prints one PASS/FAIL line per criterion.
"""

import itertools
import json
import math
import time

import numpy as np
import pytest

from signlab import witnesses as W
from signlab.domains import COMPLEX_PLANE, POSITIVE_REALS, REAL_LINE, DomainSpec, RealInterval, annulus
from signlab.finite_field import (FqField, bijective_monomials, enumerate_sign_preservers,
                                  positive_multiples_of_automorphisms)
from signlab.graph_verifier import verify_graph_preserver
from signlab.graphs import cycle_graph, path_graph, star_graph
from signlab.numeric import Kind, positivity_verdict, schur_complement
from signlab.reports import Outcome, dumps, replay
from signlab.transforms import (absolutely_monotonic, affine, apply_entrywise,
                                build_irregular_preserver, fh_power, parse_fn, power_sign,
                                scaled_conjugate, scaled_identity)
from signlab.verifier import (classify_preserver, interior_grid, check_monotone_preserver,
                              verify_sign_preserver)

from conftest import random_hermitian

MIXED = "re(z) + 1i*im(z)*sgn(re(z))"  # z on the right half plane, conj z on the left
TARGETED = {"beta-gate", "fh", "vandermonde", "rank-one", "boundary", "two-by-two",
            "multiplicativity", "g-battery", "cycle-witness", "diagonal-vs-ones"}


def replays(rep):
    return replay(json.loads(dumps(rep.to_json()))).ok


def principal_minors(M):
    n = M.shape[0]
    for r in range(1, n + 1):
        for S in itertools.combinations(range(n), r):
            yield S, np.linalg.det(M[np.ix_(S, S)]).real


# -------------------------------------------------------------- 1


def test_criterion_01_power_boundary_at_n3(rng):
    t0 = time.perf_counter()
    for beta in (0.3, 0.5, 0.9):
        scan = W.fh_scan(3, beta)
        assert scan.eps_found is not None and scan.best_relative_min_eig < -1e-8
        img = fh_power(beta)(W.fitzgerald_horn_matrix(3, scan.eps_found).entries)
        assert positivity_verdict(img).kind is Kind.INDEFINITE
    for beta in (1, 2, 1.5):
        assert W.fh_scan(3, beta).eps_found is None
        f = fh_power(beta)
        for _ in range(10_000):
            rank = int(rng.integers(1, 4))
            B = rng.uniform(0, 1, (3, rank)) * rng.uniform(0.1, 10)
            img = positivity_verdict(f(B @ B.T))
            assert img.kind is not Kind.INDEFINITE
    assert time.perf_counter() - t0 < 10


# -------------------------------------------------------------- 2


def test_criterion_02_power_sign_preserves_at_n2():
    t0 = time.perf_counter()
    for alpha in (0.5, 1, 2):
        for beta in (0.5, 1, 2, 3):
            for mode in ("pd", "psd"):
                rep = verify_sign_preserver(power_sign(alpha, beta), REAL_LINE, 2, mode, budget=100_000)
                assert rep.outcome is Outcome.NOT_FALSIFIED, (alpha, beta, mode)
    rep = verify_sign_preserver(parse_fn("z+0.1"), POSITIVE_REALS, 2)
    assert rep.outcome is Outcome.FALSIFIED and replays(rep)
    assert time.perf_counter() - t0 < 30


# -------------------------------------------------------------- 3


def test_criterion_03_only_identity_power_survives_n3_n4():
    for n in (3, 4):
        for beta in (0.5, 2, 2.5, 3):
            rep = verify_sign_preserver(power_sign(1, beta), REAL_LINE, n, budget=100_000)
            assert rep.outcome is Outcome.FALSIFIED, (n, beta)
            assert rep.witness.strategy in TARGETED and replays(rep)
        rep = verify_sign_preserver(power_sign(1, 1), REAL_LINE, n, budget=100_000)
        assert rep.outcome is Outcome.NOT_FALSIFIED


# -------------------------------------------------------------- 4


def test_criterion_04_annulus_preservers_and_3x3_identity(rng):
    d = annulus(0.5, 2)
    for f in (scaled_identity(1.7), scaled_conjugate(0.6)):
        assert verify_sign_preserver(f, d, 3).outcome is Outcome.NOT_FALSIFIED
    for seed in (0, 1):
        rep = verify_sign_preserver(build_irregular_preserver(1, 1, seed), d, 3)
        assert rep.outcome is Outcome.FALSIFIED
        assert rep.witness.strategy in ("multiplicativity", "g-battery", "cycle-witness")
        assert replays(rep)
    for _ in range(10_000):
        a, b, c = rng.uniform(0.1, 3, 3)
        x, y, z = rng.normal(size=3) + 1j * rng.normal(size=3)
        ref = np.linalg.det(W.three_by_three(a, b, c, x, y, z).entries).real
        val = W.three_by_three_det(a, b, c, x, y, z)
        scale = max(a * b * c, a * abs(z) ** 2, b * abs(y) ** 2, c * abs(x) ** 2, abs(x * y * z))
        assert abs(val - ref) <= 1e-12 * scale


# -------------------------------------------------------------- 5


def _polar(r, t):
    return r * complex(math.cos(t), math.sin(t))


def test_criterion_05_tridiagonal_and_cycle_witness(rng):
    for R in (0.5, 1, 2):
        for k in range(1, 13):
            T = W.tridiagonal_T(k, R).entries.real
            inv = np.linalg.inv(T)
            assert np.linalg.det(T) == pytest.approx((k + 1) * R ** k, rel=1e-10)
            m = k + 1
            assert inv[0, 0] == pytest.approx((m - 1) / (R * m), rel=1e-10)
            assert inv[0, -1] == pytest.approx((-1) ** m / (R * m), rel=1e-10)
    checked = {True: 0, False: 0}
    for n in (3, 4, 5):
        for _ in range(1000):
            R = float(rng.choice([0.5, 1, 2]))
            r1, r2 = rng.uniform(0.2, 3, 2)
            offA, offB = _polar(r1, rng.uniform(-np.pi, np.pi)), _polar(r2, rng.uniform(-np.pi, np.pi))
            eps = float(rng.uniform(1e-3, 0.5))
            a, b = _polar(r1, rng.uniform(-np.pi, np.pi)), _polar(r2, rng.uniform(-np.pi, np.pi))
            cw = W.cycle_witness(n, R, offA, offB, eps)
            assert positivity_verdict(cw.matrix).kind is Kind.PD
            shell = cw.shell(a, b)
            S = schur_complement(shell, n - 1).entries[0, 0].real
            closed = cw.schur_closed_form(a, b)
            assert S == pytest.approx(closed, rel=1e-10, abs=1e-10 * max(1.0, cw.lam))
            # odd n: PD iff Re(a conj b) > Re(offA conj offB) - eps; even n: the mirror image
            gap = (a * np.conj(b)).real - (offA * np.conj(offB)).real
            indefinite = gap < -eps if n % 2 else gap > eps
            assert cw.predicts_indefinite(a, b) == indefinite
            v = positivity_verdict(shell)
            if v.decided:
                assert (v.kind is Kind.INDEFINITE) == indefinite
                checked[indefinite] += 1
    assert min(checked.values()) > 100  # both sides of the dichotomy were exercised


# -------------------------------------------------------------- 6


def test_criterion_06_graph_dispatch():
    B = W.beta_gate(0.75)
    assert np.linalg.det(B.entries).real == pytest.approx(-0.125, abs=1e-12)
    img = apply_entrywise(power_sign(1, 2), B)
    assert np.linalg.det(img).real == pytest.approx(1 - 2 * 0.75 ** 4, abs=1e-9)
    assert round(np.linalg.det(img).real, 4) == 0.3672
    for G in (path_graph(3), star_graph(3)):
        for d in (REAL_LINE, POSITIVE_REALS):
            rep = verify_graph_preserver(power_sign(1, 2), G, d)
            assert rep.witness.strategy == "beta-gate" and replays(rep)
        for alpha in (0.5, 2):
            rep = verify_graph_preserver(build_irregular_preserver(alpha, 1, 3), G, COMPLEX_PLANE)
            assert rep.outcome is Outcome.NOT_FALSIFIED
    for G in (cycle_graph(4), cycle_graph(5)):
        for spec in (MIXED, "re(z) + 1i*im(z)*sgn(im(z) - 0.5)"):
            rep = verify_graph_preserver(parse_fn(spec), G, COMPLEX_PLANE)
            assert rep.witness.strategy == "cycle-witness" and replays(rep), spec
        assert verify_graph_preserver(scaled_conjugate(2), G, COMPLEX_PLANE).outcome is Outcome.NOT_FALSIFIED


# -------------------------------------------------------------- 7


def test_criterion_07_finite_field_counts():
    t0 = time.perf_counter()
    for p, count in ((3, 1), (5, 2)):
        F = FqField(p)
        surv = enumerate_sign_preservers(F, 3)
        assert len(surv) == count and set(surv) == positive_multiples_of_automorphisms(F)
        assert {s[1] for s in surv} == set(F.positives)  # c * id with c positive
    F4 = FqField(2, 2)
    surv = enumerate_sign_preservers(F4, 2)
    assert len(surv) == 6 and set(surv) == bijective_monomials(F4)
    assert time.perf_counter() - t0 < 5

    t0 = time.perf_counter()
    F7 = FqField(7)
    surv = enumerate_sign_preservers(F7, 3)
    assert F7.positives == (1, 2, 4)
    assert len(surv) == 3 and set(surv) == positive_multiples_of_automorphisms(F7)
    assert set(surv) == {tuple(c * x % 7 for x in range(7)) for c in (1, 2, 4)}
    assert time.perf_counter() - t0 < 600


# -------------------------------------------------------------- 8


def test_criterion_08_monotone_preservers():
    for n in (2, 3):
        for c, d in ((1, 0), (2.5, 0.3)):
            rep = check_monotone_preserver(affine(c, d), n, budget=100_000)
            assert rep.outcome is Outcome.NOT_FALSIFIED
            assert sum(rep.checks_run.values()) >= 100_000
    for beta in (0.5, 2):
        rep = check_monotone_preserver(fh_power(beta), 2)
        assert rep.outcome is Outcome.FALSIFIED and replays(rep)
        assert rep.witness.A.shape == rep.witness.B.shape == (2, 2)


# -------------------------------------------------------------- 9


def test_criterion_09_extension_identity_and_minors(rng):
    for n in range(1, 7):
        for A in random_hermitian(rng, n, 170):
            x = float(rng.normal() * 3)
            lhs = np.linalg.det(W.extend(A, x).entries)
            rhs = (x - A[-1, -1].real) * np.linalg.det(A)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))
    for n in (3, 6):
        for _ in range(60):
            rank = int(rng.integers(1, n + 1))
            B = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
            E = W.extend(B @ B.conj().T).entries
            scale = max(1.0, float(np.abs(np.linalg.eigvalsh(E)).max()))
            minors = list(principal_minors(E))
            assert len(minors) == 2 ** (n + 1) - 1
            for S, m in minors:
                assert m >= -1e-10 * scale ** len(S)
                if n - 1 in S and n in S:  # two equal rows
                    assert abs(m) <= 1e-10 * scale ** len(S)


# -------------------------------------------------------------- 10

UNIT = DomainSpec((RealInterval(0.0, 1.0, lo_closed=False),))


def _candidate(rng):
    """A random function on (0, 1] and whether it has a zero there."""
    c, b = float(rng.uniform(0.2, 3)), float(rng.uniform(0.3, 3))
    t, d = float(rng.uniform(0.1, 0.9)), float(rng.uniform(0.05, 1))
    kind = int(rng.integers(6))
    if kind == 0:
        return f"{c!r}*pow(z, {b!r})", False
    if kind == 1:
        return f"{c!r}*pow(z, {b!r}) + {d!r}", False
    if kind == 2:
        return f"{c!r}*(z - {t!r} + abs(z - {t!r}))", True
    if kind == 3:
        return f"{c!r}*(z - {t!r})*(z - {t!r})", True
    if kind == 4:
        return f"{c!r}*z*(z - {t!r} + abs(z - {t!r})) + {c!r}*pow(z, {b!r})", False
    return "0*z", True


def test_criterion_10_increasing_midconvex_and_zero_dichotomy():
    builtins = [(power_sign(a, b), REAL_LINE) for a in (0.5, 2) for b in (0.5, 1, 3)]
    builtins += [(scaled_identity(1.5), COMPLEX_PLANE), (scaled_conjugate(0.5), COMPLEX_PLANE),
                 (build_irregular_preserver(1, 2, 0), annulus(0.5, 2)),
                 (affine(2, 0.5), POSITIVE_REALS), (fh_power(1.5), POSITIVE_REALS),
                 (absolutely_monotonic([(1, 0, 1.0), (3, 0, 0.5), (0, 0, 0.2)]), POSITIVE_REALS)]
    for f, d in builtins:
        c = classify_preserver(f, d, pairs=10_000)
        assert c.monotonicity_violations == 0 and c.midconvexity_violations == 0, f.spec

    rng = np.random.default_rng(7)
    grid = np.concatenate([interior_grid(UNIT, 64), np.linspace(1e-4, 1, 10_000)])
    survivors, vanishing = 0, 0
    for _ in range(30):
        spec, has_zero = _candidate(rng)
        f = parse_fn(spec)
        vanishing += has_zero
        if verify_sign_preserver(f, UNIT, 2, "psd", budget=20_000).outcome is Outcome.FALSIFIED:
            continue
        survivors += 1
        vals = np.abs(f(grid))
        assert np.all(vals == 0) or (not has_zero and np.all(vals > 0)), spec
    assert survivors >= 3 and vanishing >= 3
