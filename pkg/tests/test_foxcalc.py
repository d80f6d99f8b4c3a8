from hypothesis import given, settings

from l2rank.fixtures import load_fixture
from l2rank.foxcalc import (
    augment_matrix,
    augmented_jacobian,
    extend_jacobian,
    fox_derivative,
    fox_jacobian,
)
from l2rank.presentations import GroupRingElement, Word

from conftest import ranked_words


def _gen(rank, j):
    return GroupRingElement.of(Word.generator(rank, j))


@settings(max_examples=200)
@given(ranked_words())
def test_fundamental_formula(rw):
    rank, w = rw
    total = GroupRingElement.zero(rank)
    for j in range(rank):
        total = total + fox_derivative(w, j) * (_gen(rank, j) - 1)
    assert total == GroupRingElement.of(w) - 1


@given(ranked_words(max_len=6), ranked_words(max_len=6))
def test_product_rule(a, b):
    rank = min(a[0], b[0])
    u = Word(rank, tuple(l for l in a[1].letters if l[0] < rank))
    v = Word(rank, tuple(l for l in b[1].letters if l[0] < rank))
    for j in range(rank):
        lhs = fox_derivative(u * v, j)
        rhs = fox_derivative(u, j) + GroupRingElement.of(u) * fox_derivative(v, j)
        assert lhs == rhs


def test_generator_derivatives():
    x = Word.generator(2, 0)
    assert fox_derivative(x, 0) == GroupRingElement.one(2)
    assert fox_derivative(x, 1) == GroupRingElement.zero(2)
    assert fox_derivative(x.inverse(), 0) == -GroupRingElement.of(x.inverse())


def test_kt_augmented_jacobian():
    kt = load_fixture("kt")
    assert augmented_jacobian(kt) == [[-1, 2], [2, -5]]
    assert augment_matrix(fox_jacobian(kt)) == [[-1, 2], [2, -5]]


def test_augmented_jacobian_is_exponent_sums():
    p = load_fixture("hn_3")
    expected = [[r.exponent_sum(j) for j in range(p.rank)] for r in p.relators]
    assert augmented_jacobian(p) == expected


def test_extend_jacobian_stacks_rows():
    p = load_fixture("pslz")
    b = extend_jacobian(p, [p.word("a*b")])
    assert b.extended.rows == 3
    assert augment_matrix(b.extended)[2] == [1, 1]
