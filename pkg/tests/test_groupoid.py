import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from groupoid_galois import catalog
from groupoid_galois.errors import CapExceeded, GroupoidValidationError, NotAnObject, NotConnected
from groupoid_galois.groupoid import (
    brute_force_wide_subgroupoids,
    canonical_enumeration,
    canonical_enumeration_family,
    check_condition_superfluous,
    coarse_groupoid,
    connected_components,
    connected_decomposition,
    cyclic_group,
    discrete_groupoid,
    disjoint_union,
    enumerate_wide_subgroupoids,
    generated_wide_subgroupoid,
    is_isomorphism,
    isotropy_group,
    klein_four,
    product_with_group,
    symmetric_group_3,
    validate_groupoid,
    violating_enumerations,
)

from s8_rows import H1, K0, K1


def closure_oracle(G, S):
    """Fixed point of adding products and inverses, with plain Python sets."""
    S = set(S) | set(G.objects)
    while True:
        new = set(S)
        for g in S:
            new.add(int(G.inv[g]))
            for h in S:
                if G.comp[g, h] >= 0:
                    new.add(int(G.comp[g, h]))
        if new == S:
            return frozenset(S)
        S = new


def test_coarse_two_objects_valid():
    G = coarse_groupoid(2)
    assert len(G) == 4 and len(G.objects) == 2
    assert validate_groupoid(G.to_json()).same_table(G)


def test_missing_inverse_reported():
    doc = coarse_groupoid(2).to_json()
    del doc["morphisms"][1]["inv"]
    with pytest.raises(GroupoidValidationError) as exc:
        validate_groupoid(doc)
    assert "MissingInverse" in exc.value.kinds or "Malformed" in exc.value.kinds


def test_wrong_inverse_is_missing_inverse():
    doc = coarse_groupoid(2).to_json()
    m = next(x for x in doc["morphisms"] if x["dom"] != x["ran"])
    m["inv"] = m["id"]
    with pytest.raises(GroupoidValidationError) as exc:
        validate_groupoid(doc)
    assert "MissingInverse" in exc.value.kinds


def test_nonassociative_table_rejected():
    G = cyclic_group(3)
    doc = G.to_json()
    # g * g = 1 instead of g^2 breaks associativity
    for row in doc["compose"]:
        if row[0] == "g" and row[1] == "g":
            row[2] = "1"
    with pytest.raises(GroupoidValidationError) as exc:
        validate_groupoid(doc)
    assert exc.value.kinds - {"Malformed"}


def test_s8_groupoid_has_16_morphisms():
    G = catalog.s8_groupoid()
    assert len(G) == 16
    assert validate_groupoid(G.to_json()).same_table(G)
    assert {G.names[e] for e in G.objects} == {"(f1,f1,1)", "(f2,f2,1)"}


def test_components():
    assert len(connected_components(catalog.two_z2_groupoid())) == 2
    assert len(connected_components(catalog.s8_groupoid())) == 1
    assert len(connected_components(discrete_groupoid(["a", "b", "c"]))) == 3


def test_isotropy():
    G = catalog.s8_groupoid()
    H = isotropy_group(G, "(f1,f1,1)")
    assert len(H) == 4
    assert all(H.comp[a, a] == H.objects[0] for a in range(4))  # exponent 2, so V4
    assert len(isotropy_group(discrete_groupoid(["a", "b"]), "a")) == 1
    A3 = coarse_groupoid(3)
    assert all(len(isotropy_group(A3, e)) == 1 for e in A3.objects)
    with pytest.raises(NotAnObject):
        isotropy_group(G, "(f1,f1,g)")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_coarse_counts(n):
    G = coarse_groupoid(n)
    assert len(G) == n * n and len(G.objects) == n
    assert all(G.comp[g, h] >= 0 for g in range(n * n) for h in range(n * n) if G.dom[g] == G.ran[h])


def test_products():
    assert len(product_with_group(coarse_groupoid(2), cyclic_group(2))) == 8
    G = cyclic_group(3)
    P = product_with_group(coarse_groupoid(1), G)
    assert len(P) == 3 and np.array_equal(P.comp, G.comp)


def test_decomposition():
    D = connected_decomposition(catalog.s8_groupoid())
    assert D.n == 2 and len(D.isotropy) == 4
    S3 = symmetric_group_3()
    D = connected_decomposition(S3)
    assert D.n == 1 and len(D.isotropy) == 6
    assert is_isomorphism(S3, D.product, D.iso)
    D = connected_decomposition(coarse_groupoid(3))
    assert D.n == 3 and len(D.isotropy) == 1
    with pytest.raises(NotConnected):
        connected_decomposition(catalog.two_z2_groupoid())


def test_wide_subgroupoid_counts():
    G = catalog.s8_groupoid()
    W = enumerate_wide_subgroupoids(G)
    # 5 * 5 disconnected, 4 with isotropy 1, 3 * 2 with isotropy of order 2, 1 full
    assert len(W) == 36
    assert W == brute_force_wide_subgroupoids(G)
    assert len(enumerate_wide_subgroupoids(discrete_groupoid(["a", "b"]))) == 1
    assert len(enumerate_wide_subgroupoids(catalog.two_z2_groupoid())) == 4


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        enumerate_wide_subgroupoids(catalog.s8_groupoid(), cap=5)


def test_generated():
    G = catalog.s8_groupoid()
    assert generated_wide_subgroupoid(G).members == frozenset(G.objects)
    h1 = generated_wide_subgroupoid(G, H1)
    assert h1.names == sorted(["(f1,f1,1)", "(f2,f2,1)"] + H1, key=G.index)
    big = generated_wide_subgroupoid(G, K0 + K1)
    assert big == generated_wide_subgroupoid(G, K0 + K1 + H1)
    assert len(big) == 8


@pytest.mark.parametrize("G", [coarse_groupoid(2), product_with_group(coarse_groupoid(2), cyclic_group(2)),
                               catalog.s8_groupoid(), product_with_group(coarse_groupoid(3), cyclic_group(2))])
def test_canonical_enumerations(G):
    fam = canonical_enumeration_family(G)
    for e, seq in fam.items():
        assert seq[0] == e
        assert sorted(seq) == sorted(G.star(e))
    assert check_condition_superfluous(G, fam)


def test_canonical_enumeration_length():
    G = product_with_group(coarse_groupoid(2), cyclic_group(2))
    for e in G.objects:
        assert len(canonical_enumeration(G, e).morphisms) == 4


def test_group_enumerations_always_work():
    G = klein_four()
    for rest in itertools.permutations([g for g in range(4) if g != G.objects[0]]):
        assert check_condition_superfluous(G, {G.objects[0]: (G.objects[0],) + rest})


def test_adversarial_enumeration_exists():
    G = product_with_group(coarse_groupoid(2), cyclic_group(2))
    bad = violating_enumerations(G, limit=1)
    assert bad
    assert not check_condition_superfluous(G, bad[0])


@given(st.sampled_from([0, 1, 2, 3, 4, 5]), st.integers(0, 2**16))
def test_closure_matches_set_oracle(k, bits):
    G = [coarse_groupoid(2), catalog.s8_groupoid(), catalog.two_z2_groupoid(), symmetric_group_3(),
         product_with_group(coarse_groupoid(2), cyclic_group(3)), disjoint_union(coarse_groupoid(2), cyclic_group(4))][k]
    S = [g for g in range(len(G)) if (bits >> g) & 1]
    assert generated_wide_subgroupoid(G, S).members == closure_oracle(G, S)


def test_enumeration_matches_brute_force_seeded():
    for seed in range(40):
        G, _ = catalog.random_groupoid(np.random.default_rng(seed), max_morphisms=10)
        assert enumerate_wide_subgroupoids(G) == brute_force_wide_subgroupoids(G)


def test_groupoid_json_roundtrip():
    G = catalog.s8_groupoid()
    assert validate_groupoid(G.to_json()).same_table(G)
