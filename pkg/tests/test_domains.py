import cmath
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from signlab.domains import (COMPLEX_PLANE, NONNEG_REALS, POSITIVE_REALS, REAL_LINE, Annulus,
                             DomainSpec, HalfLine, PointSet, PolarRectangle, RealInterval,
                             annulus, is_theorem_domain, parse_domain, sample_hermitian)
from signlab.errors import BudgetExhausted, InputError
from signlab.numeric import Kind, positivity_verdict


def unit_circle_points(k):
    zs = [cmath.exp(1j * np.pi * 2.0 ** (j - k - 2)) for j in range(1, k + 1)]
    return tuple(zs + [z.conjugate() for z in zs])


def psd_type_point_domain(eps=0.05, k=3):
    return DomainSpec((RealInterval(1 - eps, 1 + eps, False, True), PointSet(unit_circle_points(k))))


# -------------------------------------------------------------- membership


def test_membership_examples():
    assert annulus(0.5, 2).contains_point(1 + 0j)
    assert not DomainSpec((RealInterval(0, 1, False, False),)).contains_point(0)
    assert DomainSpec((PointSet((1j, -1j)),)).contains_point(1j)
    assert not DomainSpec((PointSet((1j, -1j)),)).contains_point(1j + 1e-15)


def test_membership_endpoints():
    d = annulus(0.5, 2, lo_closed=False)
    assert not d.contains_point(0.5j)
    assert d.contains_point(2j)
    assert d.contains_point(-1.0)
    pr = DomainSpec((PolarRectangle(0.5, 2, -0.5, 0.5),))
    assert pr.contains_point(cmath.rect(1, 0.4))
    assert not pr.contains_point(cmath.rect(1, 0.6))
    assert not pr.contains_point(-1)
    half = DomainSpec((HalfLine(-1, -2.0, closed=False),))
    assert half.contains_point(-3) and not half.contains_point(-2) and not half.contains_point(3)


def test_vectorized_membership():
    z = np.array([0.5, 1j, 3.0, -1.0 + 1e-3j])
    assert annulus(0.5, 2).contains(z).tolist() == [True, True, False, True]


def test_degenerate_pieces_rejected():
    with pytest.raises(InputError):
        DomainSpec(())
    with pytest.raises(InputError):
        Annulus(-1.0, 1.0)


# -------------------------------------------------------------- flags


def test_real_line_flags():
    f = REAL_LINE.flags
    assert f.reflection_symmetric and f.modulus_closed and f.pd_type and f.psd_type and f.i_is_interval
    (iv,) = REAL_LINE.nonneg
    assert (iv.lo, iv.hi, iv.lo_closed) == (0.0, np.inf, True)


def test_annulus_flags():
    # closed inner radius: points of modulus eta cannot move down inside I
    closed = annulus(0.5, 1).flags
    assert closed.reflection_symmetric and closed.modulus_closed and not closed.psd_type
    # open inner radius: psd type
    half_open = annulus(0.5, 1, lo_closed=False).flags
    assert half_open.reflection_symmetric and half_open.modulus_closed and half_open.psd_type
    # an unbounded annulus is pd type
    assert annulus(0.5, np.inf, hi_closed=False).flags.pd_type


def test_point_set_domain_is_psd_type():
    for k in (2, 3, 4):
        assert psd_type_point_domain(0.05, k).flags.psd_type


def test_positive_reals_flags():
    f = POSITIVE_REALS.flags
    assert f.pd_type and f.psd_type and f.reflection_symmetric
    assert NONNEG_REALS.contains_point(0) and not POSITIVE_REALS.contains_point(0)


def test_disconnected_nonneg_part():
    d = DomainSpec((RealInterval(0, 1), RealInterval(2, 3)))
    assert not d.flags.i_is_interval
    assert d.positive_interval().hi - d.positive_interval().lo == pytest.approx(1)


DOMAINS = [REAL_LINE, COMPLEX_PLANE, POSITIVE_REALS, annulus(0.5, 2), annulus(0.5, 1, False),
           DomainSpec((PolarRectangle(0.5, 2, -0.3, 0.7),)),
           DomainSpec((PolarRectangle(0.5, 2, 0.2, 0.7, lo_closed=False),)),
           DomainSpec((RealInterval(-1, 2, False, True), PointSet((1j, 2 - 1j)))),
           psd_type_point_domain()]


@pytest.mark.parametrize("d", DOMAINS, ids=range(len(DOMAINS)))
def test_flags_reflection_invariant(d):
    assert d.reflected().flags == d.flags


@pytest.mark.parametrize("d", DOMAINS, ids=range(len(DOMAINS)))
def test_json_round_trip(d):
    again = DomainSpec.from_json(json.dumps(d.to_json()))
    assert again == d and again.flags == d.flags


def test_parse_domain():
    assert parse_domain("real-line") is REAL_LINE
    assert parse_domain("annulus:0.5:2") == annulus(0.5, 2)
    assert parse_domain('{"pieces": [{"kind": "annulus", "rLo": 0.5, "rHi": 2}]}') == annulus(0.5, 2)
    with pytest.raises(InputError):
        parse_domain("nowhere")
    assert is_theorem_domain(COMPLEX_PLANE) == "C"
    assert is_theorem_domain(annulus(0.5, 2)) is None


# -------------------------------------------------------------- sampling


def test_sampler_examples():
    A = sample_hermitian(REAL_LINE, 3, "pd", seed=1)
    assert positivity_verdict(A).kind is Kind.PD
    B = sample_hermitian(POSITIVE_REALS, 2, "indefinite", seed=7)
    assert positivity_verdict(B).kind is Kind.INDEFINITE
    assert np.all(B.entries.real > 0)


def test_unit_circle_cannot_be_pd():
    # every 2x2 minor of a matrix with unit diagonal and unimodular entries vanishes
    with pytest.raises(BudgetExhausted):
        sample_hermitian(annulus(1, 1), 3, "pd", seed=3)
    A = sample_hermitian(annulus(1, 1), 3, "any", seed=3)
    assert np.allclose(np.abs(A.entries), 1)


def test_sampler_deterministic():
    a = sample_hermitian(COMPLEX_PLANE, 4, "any", seed=11)
    b = sample_hermitian(COMPLEX_PLANE, 4, "any", seed=11)
    assert a == b


SAMPLABLE = [d for d in DOMAINS if d.reals]


@given(st.sampled_from(range(len(SAMPLABLE))), st.integers(1, 5),
       st.sampled_from(["pd", "indefinite", "psdSingular", "any"]), st.integers(0, 2**31))
def test_sampler_postconditions(i, n, mode, seed):
    d = SAMPLABLE[i]
    try:
        A = sample_hermitian(d, n, mode, seed=seed)
    except BudgetExhausted:
        return
    assert np.all(d.contains(A.entries))
    kind = positivity_verdict(A).kind
    expect = {"pd": {Kind.PD}, "indefinite": {Kind.INDEFINITE},
              "psdSingular": {Kind.MARGINAL, Kind.SINGULAR}, "any": set(Kind)}[mode]
    assert kind in expect


def test_sampler_rejects_bad_arguments():
    with pytest.raises(InputError):
        sample_hermitian(REAL_LINE, 3, "sideways")
    with pytest.raises(InputError):
        sample_hermitian(REAL_LINE, 0)
    # Hermitian diagonals are real, so a domain without reals has no matrices
    with pytest.raises(InputError):
        sample_hermitian(DomainSpec((PolarRectangle(0.5, 2, 0.2, 0.7),)), 2)
