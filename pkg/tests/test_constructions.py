import pytest

from groupoid_galois import catalog
from groupoid_galois.action import build_action, check_equivalence, predicates
from groupoid_galois.algebra import IdempotentAlgebra
from groupoid_galois.constructions import (
    globalization_isomorphism,
    globalize,
    orthogonalize,
    standard_restriction,
    verify_globalization,
)
from groupoid_galois.groupoid import cyclic_group


def test_orthogonalize_small_global(beta47):
    o = orthogonalize(beta47)
    eps = o.action
    G = beta47.groupoid
    assert eps.m == 4
    d, r, g = (G.index(x) for x in ("d(g)", "r(g)", "g"))
    # copies: d gets (1, 2), r gets (2', 3')
    assert o.embeddings[d] == {0: 0, 1: 1}
    assert o.embeddings[r] == {1: 2, 2: 3}
    assert eps.pi(g) == {0: 3, 1: 2}
    assert predicates(eps)["orthogonal"]
    assert check_equivalence(o.embeddings, beta47, eps)


def test_orthogonalize_is_identity_on_orthogonal(beta47):
    eps = orthogonalize(beta47).action
    again = orthogonalize(eps)
    assert again.action.signature() == eps.signature()
    assert all(mp == {i: i for i in mp} for mp in again.embeddings.values())


def test_orthogonalize_two_z2(two_z2):
    assert orthogonalize(two_z2).action.m == 4


def test_global_input_gives_same_size(two_z2):
    g = globalize(two_z2)
    assert g.action.m == 4  # equals the orthogonalization, see the ledger
    eps = orthogonalize(two_z2).action
    h = globalize(eps)
    assert h.action.m == eps.m
    assert all(sorted(mp.values()) == sorted(eps.S(e)) for e, mp in h.embeddings.items())


def test_globalize_orthogonal_small(beta47):
    eps = orthogonalize(beta47).action
    g = globalize(eps)
    assert g.action.m == eps.m
    assert verify_globalization(eps, g.action, g.embeddings).ok


def partial_z2():
    G = cyclic_group(2)
    return build_action(G, IdempotentAlgebra(2), {"1": [0, 1], "g": [0]}, {"g": {0: 0}})


def test_partial_z2_globalization():
    alpha = partial_z2()
    g = globalize(alpha)
    # germs (1, e1), (1, e2), (g, e2); (g, e1) is glued to (1, e1)
    assert g.action.m == 3
    assert sorted(len(c) for c in g.classes) == [1, 1, 2]
    assert verify_globalization(alpha, g.action, g.embeddings).ok
    assert predicates(g.action)["global"]


def test_global_action_is_its_own_globalization(s8):
    ident = {e: {i: i for i in s8.S(e)} for e in s8.groupoid.objects}
    assert verify_globalization(s8, s8, ident).ok


def test_g4_detects_unreached_index():
    G = cyclic_group(2)
    alpha = build_action(G, IdempotentAlgebra(1), {"1": [0], "g": [0]}, {"g": {0: 0}})
    bigger = build_action(G, IdempotentAlgebra(2), {"1": [0, 1], "g": [0, 1]}, {"g": {0: 0, 1: 1}})
    rep = verify_globalization(alpha, bigger, {"1": {0: 0}})
    assert rep.failed() == ["G4"]


def test_restriction_of_whole_algebra(s8):
    assert standard_restriction(s8, range(s8.m)).signature() == s8.signature()


def test_globalization_restricts_back(beta47):
    eps = orthogonalize(beta47).action
    g = globalize(eps)
    image = sorted(k for mp in g.embeddings.values() for k in mp.values())
    back = standard_restriction(g.action, image)
    local = {k: t for t, k in enumerate(image)}
    fam = {e: {i: local[k] for i, k in mp.items()} for e, mp in g.embeddings.items()}
    assert check_equivalence(fam, eps, back)


def test_restriction_can_empty_a_support():
    G = cyclic_group(2)
    swap = build_action(G, IdempotentAlgebra(2), {"1": [0, 1], "g": [0, 1]}, {"g": {0: 1, 1: 0}})
    r = standard_restriction(swap, [0])
    assert r.empty_supports() == [G.index("g")]


@pytest.mark.parametrize("seed", range(25))
def test_globalization_order_independent(seed):
    alpha = catalog.random_action(seed, max_m=6, max_morphisms=12)
    a, b = globalize(alpha), globalize(alpha, order_seed=seed + 1)
    assert verify_globalization(alpha, b.action, b.embeddings).ok
    assert globalization_isomorphism(a, b) is not None
