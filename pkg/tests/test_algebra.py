from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from groupoid_galois import oracles
from groupoid_galois.algebra import (
    QQ,
    BaseRing,
    IdempotentAlgebra,
    PartitionSubalgebra,
    all_idempotents,
    bracket_parse,
    bracket_render,
    partition_meet_as_intersection,
)
from groupoid_galois.errors import AlgebraMismatch, OverlappingBlocks, ParseError, SupportTooLarge

from conftest import BASES


def test_products():
    A = IdempotentAlgebra(3)
    e1, e2, e3 = A.basis()
    assert (e1 * e2).is_zero()
    assert (e1 + e2) * (e1 + e2) == e1 + e2
    assert (e1 + e2).is_idempotent()
    assert not (2 * e1).is_idempotent()


def test_f2_addition():
    A = IdempotentAlgebra(3, BaseRing(2))
    e1, e2, e3 = A.basis()
    assert (e1 + e2) + (e2 + e3) == e1 + e3


def test_mixed_algebras_refused():
    with pytest.raises(AlgebraMismatch):
        IdempotentAlgebra(2).e(0) + IdempotentAlgebra(3).e(0)


def test_base_ring_parsing():
    assert BaseRing.parse("Q") == QQ
    assert BaseRing.parse("Fp:5").p == 5
    with pytest.raises(ValueError):
        BaseRing.parse("Fp:4")
    assert BaseRing(5).coerce(Fraction(1, 2)) == 3


@pytest.mark.parametrize("support,expected", [([0], 2), ([0, 1], 4), ([], 1)])
def test_idempotent_counts(support, expected):
    A = IdempotentAlgebra(3)
    got = all_idempotents(A, support)
    assert len(got) == expected
    assert {x.coeffs for x in got} == oracles.idempotents_by_equation(A, support)


@pytest.mark.parametrize("base", BASES, ids=str)
def test_idempotents_agree_with_equation(base):
    A = IdempotentAlgebra(4, base)
    got = {x.coeffs for x in all_idempotents(A, [0, 2, 3])}
    assert got == oracles.idempotents_by_equation(A, [0, 2, 3])


def test_idempotent_cap():
    with pytest.raises(SupportTooLarge):
        all_idempotents(IdempotentAlgebra(5), range(5), cap=3)


@pytest.mark.parametrize("a,b,expected,m", [
    ("[1,2]", "[2,3]", "[1,2,3]", 4),
    ("[1,2][3,4]", "[1,3][2,4]", "[1,2,3,4]", 4),
    ("[1,2][3,4]", "[1,2][3,4]", "[1,2][3,4]", 4),
])
def test_meet(a, b, expected, m):
    A = IdempotentAlgebra(m)
    C1, C2 = bracket_parse(a, A), bracket_parse(b, A)
    meet = partition_meet_as_intersection(C1, C2)
    assert bracket_render(meet) == expected
    assert oracles.meet_matches(C1, C2, meet)


def test_bracket_rows():
    A = IdempotentAlgebra(12)
    C = bracket_parse("[1,2][3,4][5,6][7,8]", A)
    assert C.to_json() == [[1, 2], [3, 4], [5, 6], [7, 8], [9], [10], [11], [12]]
    assert bracket_parse("[1,2,3,4,5,6,7,8,9,10,11,12]", A) == PartitionSubalgebra.trivial(A)
    assert bracket_parse("", A) == PartitionSubalgebra.discrete(A)


@pytest.mark.parametrize("text", ["[1,2", "[1,13]", "[0]", "[a]", "[1][x"])
def test_bracket_errors(text):
    with pytest.raises(ParseError):
        bracket_parse(text, IdempotentAlgebra(12))


def test_overlapping_blocks():
    with pytest.raises(OverlappingBlocks):
        bracket_parse("[1,2][2,3]", IdempotentAlgebra(4))


def test_order():
    A = IdempotentAlgebra(4)
    coarse, fine = bracket_parse("[1,2,3,4]", A), bracket_parse("[1,2]", A)
    assert coarse.is_subalgebra_of(fine)
    assert not fine.is_subalgebra_of(coarse)
    assert fine.contains(A.indicator([0, 1]))
    assert not fine.contains(A.e(0))


partitions = st.integers(1, 8).flatmap(
    lambda m: st.lists(st.integers(0, m - 1), min_size=m, max_size=m).map(lambda lab: (m, lab)))


@given(partitions)
def test_bracket_roundtrip(data):
    m, lab = data
    A = IdempotentAlgebra(m)
    C = PartitionSubalgebra.from_labels(A, lab)
    assert bracket_parse(bracket_render(C), A) == C


@given(partitions, st.lists(st.integers(0, 7), min_size=8, max_size=8), st.sampled_from(BASES))
def test_meet_is_span_intersection(data, other, base):
    m, lab = data
    A = IdempotentAlgebra(m, base)
    C1 = PartitionSubalgebra.from_labels(A, lab)
    C2 = PartitionSubalgebra.from_labels(A, other[:m])
    meet = partition_meet_as_intersection(C1, C2)
    assert oracles.meet_matches(C1, C2, meet)
    assert meet.is_subalgebra_of(C1) and meet.is_subalgebra_of(C2)
