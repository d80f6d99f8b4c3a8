import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from l2rank.fixtures import load_fixture
from l2rank.presentations import GroupRingElement, GroupRingMatrix, parse_ring_matrix
from l2rank.quotients import quotient_from_permutations, search_finite_quotients
from l2rank.spectral import (
    NotSelfAdjoint,
    induce_regular_matrix,
    is_self_adjoint_in,
    log_bound_report,
    moment_check,
    moments_agree,
    normalized_kernel_dimension,
    spectral_measure,
    symbolic_moments,
    z1_dimension_estimate,
)

from conftest import words

F1 = load_fixture("free_1")
F2 = load_fixture("free_2")
F2_POOL = [q for q in search_finite_quotients(F2, 4) if q.order <= 24]


def cyclic(n):
    return quotient_from_permutations(F1, [tuple((i + 1) % n for i in range(n))])


def test_induced_matrix_is_multiplicative():
    q = F2_POOL[-1]
    x = parse_ring_matrix("a + b^-1", F2.generators)
    y = parse_ring_matrix("2 - a*b", F2.generators)
    big = induce_regular_matrix(x @ y, q)
    bx, by = induce_regular_matrix(x, q), induce_regular_matrix(y, q)
    n = q.order
    prod = [[sum(bx[i][k] * by[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert big == prod


@pytest.mark.parametrize("n", [2, 3, 5, 8, 12])
def test_laplacian_on_cycle_matches_closed_form(n):
    m = parse_ring_matrix("2 + x + x^-1", ("x",))
    mu = spectral_measure(m, cyclic(n))
    assert not mu.squared
    expected = sorted(2 + 2 * math.cos(2 * math.pi * k / n) for k in range(n))
    got = sorted(x for x, mass in mu.atoms for _ in range(int(mass * n)))
    assert got == pytest.approx(expected, abs=1e-9)
    assert mu.zero_mass == (Fraction(1, n) if n % 2 == 0 else 0)
    assert mu.total_mass == 1


def test_non_self_adjoint_is_squared():
    m = parse_ring_matrix("1 + x", ("x",))
    assert spectral_measure(m, cyclic(2)).squared is False
    mu = spectral_measure(m, cyclic(4))
    assert mu.squared
    assert mu.zero_mass == Fraction(1, 4)
    with pytest.raises(NotSelfAdjoint):
        moment_check(m, cyclic(4), 2)


def test_one_plus_x_over_z2():
    mu = spectral_measure(parse_ring_matrix("1 + x", ("x",)), cyclic(2))
    assert [(round(x, 9), m) for x, m in mu.atoms] == [(0, Fraction(1, 2)), (2, Fraction(1, 2))]


def test_rectangular_matrix_squared():
    m = parse_ring_matrix("a - 1, b - 1", F2.generators)
    mu = spectral_measure(m, F2_POOL[5])
    assert mu.squared and mu.total_mass == 2


@st.composite
def self_adjoint(draw):
    size = draw(st.integers(1, 2))
    entries = [[GroupRingElement(2, dict(zip(draw(st.lists(words(2, 3), max_size=2)),
                                             draw(st.lists(st.integers(-2, 2), min_size=2, max_size=2)))))
                for _ in range(size)] for _ in range(size)]
    b = GroupRingMatrix.from_rows(entries, 2, cols=size)
    return b, b.adjoint()


@settings(max_examples=60, deadline=None)
@given(self_adjoint(), st.integers(0, len(F2_POOL) - 1))
def test_spectral_coherence(pair, qi):
    b, bstar = pair
    n = b.rows
    a = GroupRingMatrix.from_rows(
        [[b[i, j] + bstar[i, j] for j in range(n)] for i in range(n)], 2, cols=n)
    q = F2_POOL[qi]
    assert is_self_adjoint_in(a, q)
    mu = spectral_measure(a, q)
    assert mu.zero_mass == normalized_kernel_dimension(a, q)
    sym = symbolic_moments(a, q, 6)
    for k in range(7):
        assert moments_agree(Fraction(sym[k]), mu.moment(k))


@pytest.mark.parametrize("n", [2, 3, 6])
def test_moment_check(n):
    m = parse_ring_matrix("2 + x + x^-1", ("x",))
    for k in range(5):
        s, v = moment_check(m, cyclic(n), k)
        assert moments_agree(s, v)
    # tau((2 + x + x^-1)^2) = 4 + 2 on Z, plus wraparound terms on small cycles
    assert moment_check(m, cyclic(6), 2)[0] == 6


def test_log_bound_report():
    m = parse_ring_matrix("1 + x", ("x",))
    measures = [spectral_measure(m, cyclic(n)) for n in range(2, 11)]
    rep = log_bound_report(measures, 1.0, [0.5, 0.1])
    assert len(rep.rows) == 18
    assert rep.min_C >= 0
    tight = log_bound_report(measures, rep.min_C, [0.5, 0.1])
    assert not tight.violations
    if rep.min_C > 0:
        assert log_bound_report(measures, rep.min_C * 0.99, [0.5, 0.1]).violations
    assert rep.to_csv().splitlines()[0].startswith("measure,eps")


def test_log_bound_rejects_bad_eps():
    with pytest.raises(ValueError):
        log_bound_report([], 1.0, [1.5])


def test_z1_estimate_pslz():
    p = load_fixture("pslz")
    q = [q for q in search_finite_quotients(p, 3) if q.order == 6][0]
    est = z1_dimension_estimate(p, [], q)
    assert est.kernel_dim_jacobian == Fraction(7, 6)
    ext = z1_dimension_estimate(p, [p.word("a*b")], q)
    assert ext.kernel_dim_extended <= ext.kernel_dim_jacobian
