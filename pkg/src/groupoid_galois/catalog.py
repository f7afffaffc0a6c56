"""Built-in worked examples and a seeded random-action generator.

Random actions are produced as: a global action of ``A_n x G`` on copies of
a G-set, optionally restricted to a random ideal, optionally with
idempotents of different objects glued together, then relabelled.  Gluing
classes never hold two indices of the same object, which keeps (P1)-(P3)
intact, and it is how non-orthogonal actions arise.
"""

import numpy as np

from .action import PartialAction, build_action, validate_action
from .algebra import QQ, IdempotentAlgebra
from .constructions import orthogonalize, standard_restriction
from .groupoid import (
    FiniteGroupoid,
    coarse_groupoid,
    cyclic_group,
    disjoint_union,
    enumerate_wide_subgroupoids,
    group_from_permutations,
    klein_four,
    product_with_group,
    symmetric_group_3,
)


def renamed(G, mapping):
    return FiniteGroupoid([mapping.get(x, x) for x in G.names], G.dom, G.ran, G.inv, G.comp)


def s8_groupoid():
    return product_with_group(coarse_groupoid(2, ["f1", "f2"]), klein_four())


def s8_example(base=QQ):
    """``A_2 x {1,g,h,gh}`` acting globally and non-orthogonally on ``m = 12``."""
    G = s8_groupoid()
    K = klein_four()
    perms = {K.names[a]: _perm_of(a) for a in range(len(K))}
    A = IdempotentAlgebra(12, base)
    offset = {"f1": 0, "f2": 4}
    support, perm = {}, {}
    for g, name in enumerate(G.names):
        s, t, x = name[1:-1].split(",")
        support[g] = range(offset[t], offset[t] + 8)
        perm[g] = {i + offset[s]: perms[x][i] + offset[t] for i in range(8)}
    return build_action(G, A, support, perm)


def _perm_of(a):
    return {
        0: (0, 1, 2, 3, 4, 5, 6, 7),
        1: (1, 0, 3, 2, 5, 4, 7, 6),
        2: (2, 3, 0, 1, 6, 7, 4, 5),
        3: (3, 2, 1, 0, 7, 6, 5, 4),
    }[a]


def s8_orthogonalization(base=QQ):
    return orthogonalize(s8_example(base)).action


def arrow_groupoid():
    """``{g, g^-1, d(g), r(g)}``: the coarse groupoid on two objects."""
    return renamed(
        coarse_groupoid(2, ["d", "r"]),
        {"(d,d)": "d(g)", "(r,r)": "r(g)", "(d,r)": "g", "(r,d)": "g^-1"},
    )


def non_galois_global(base=QQ):
    """Global, non-orthogonal, not Galois; ``beta_g(a e1 + b e2) = b e2 + a e3``."""
    G = arrow_groupoid()
    A = IdempotentAlgebra(3, base)
    support = {"d(g)": [0, 1], "g^-1": [0, 1], "r(g)": [1, 2], "g": [1, 2]}
    perm = {"g": {0: 2, 1: 1}, "g^-1": {2: 0, 1: 1}}
    return build_action(G, A, support, perm)


def two_z2_groupoid():
    return disjoint_union(
        group_from_permutations({"f1": (0, 1), "g": (1, 0)}),
        group_from_permutations({"f2": (0, 1), "h": (1, 0)}),
    )


def not_strongly_galois(base=QQ):
    """Two copies of Z2 both swapping ``e1, e2``: Galois but not strongly Galois."""
    G = two_z2_groupoid()
    A = IdempotentAlgebra(2, base)
    support = {g: [0, 1] for g in G.names}
    perm = {"g": {0: 1, 1: 0}, "h": {0: 1, 1: 0}}
    return build_action(G, A, support, perm)


def trivial_action(G, m, base=QQ):
    """Every object supported on all of A, every morphism acting as the identity."""
    A = IdempotentAlgebra(m, base)
    return build_action(G, A, {g: range(m) for g in range(len(G))},
                        {g: {i: i for i in range(m)} for g in range(len(G))})


CATALOG = {
    "s8-example": s8_example,
    "non-galois-global": non_galois_global,
    "not-strongly-galois": not_strongly_galois,
    "s8-orthogonalization": s8_orthogonalization,
}


# -- random instances ------------------------------------------------------------

def _small_groups():
    trivial = group_from_permutations({"1": (0,)})
    return [trivial, cyclic_group(2), cyclic_group(3), cyclic_group(4), klein_four(), symmetric_group_3()]


_GROUPS = None


def _groups():
    global _GROUPS
    if _GROUPS is None:
        _GROUPS = [(H, [sorted(S.members) for S in enumerate_wide_subgroupoids(H)]) for H in _small_groups()]
    return _GROUPS


def random_groupoid(rng, max_morphisms=16, max_components=3):
    """Disjoint union of ``A_n x H`` pieces; returns (groupoid, pieces) with piece metadata."""
    pieces = []
    budget = max_morphisms
    for c in range(int(rng.integers(1, max_components + 1))):
        options = [(n, k) for n in (1, 2, 3) for k, (H, _) in enumerate(_groups()) if n * n * len(H) <= budget]
        if not options:
            break
        n, k = options[int(rng.integers(len(options)))]
        H, subgroups = _groups()[k]
        P = product_with_group(coarse_groupoid(n, [f"x{c}{s}" for s in range(n)]), H)
        pieces.append({"n": n, "group": H, "subgroups": subgroups, "groupoid": P})
        budget -= len(P)
    G = disjoint_union(*(p["groupoid"] for p in pieces))
    off = 0
    for p in pieces:
        p["offset"] = off
        off += len(p["groupoid"])
    return G, pieces


def _gset(rng, H, subgroups, free, max_points):
    """Points of a random G-set as cosets; returns the action table ``act[a][p]``."""
    cosets = []
    for tag in range(int(rng.integers(1, 3))):
        K = subgroups[0] if free else subgroups[int(rng.integers(len(subgroups)))]
        orbit = []
        for a in range(len(H)):
            c = frozenset(int(H.comp[a, k]) for k in K)
            if c not in orbit:
                orbit.append(c)
        if len(cosets) + len(orbit) > max_points and cosets:
            break
        cosets += [(tag, c) for c in orbit]
    points = list(range(len(cosets)))
    act = []
    for a in range(len(H)):
        row = []
        for tag, c in cosets:
            image = frozenset(int(H.comp[a, x]) for x in c)
            row.append(next(q for q in points if cosets[q] == (tag, image)))
        act.append(row)
    return act, len(points)


def random_global_orthogonal(rng, max_morphisms=16, max_points=8, free=False, base=QQ):
    G, pieces = random_groupoid(rng, max_morphisms)
    sup_rows, perm_rows = {}, {}
    index = 0
    layout = []
    for p in pieces:
        n, H = p["n"], p["group"]
        act, npts = _gset(rng, H, p["subgroups"], free, max(1, max_points // n))
        start = index
        index += n * npts
        layout.append((p, act, npts, start))
    A = IdempotentAlgebra(index, base)
    for p, act, npts, start in layout:
        n, m_h = p["n"], len(p["group"])
        for local in range(len(p["groupoid"])):
            st, a = divmod(local, m_h)
            s, t = divmod(st, n)
            g = p["offset"] + local
            sup_rows[g] = [start + t * npts + q for q in range(npts)]
            perm_rows[g] = {start + s * npts + q: start + t * npts + act[a][q] for q in range(npts)}
    return build_action(G, A, sup_rows, perm_rows)


def glue(alpha, classes):
    """Identify indices; each class may contain at most one index per object."""
    m = alpha.m
    G = alpha.groupoid
    owner = {}
    for e in G.objects:
        for i in alpha.S(e):
            owner.setdefault(i, set()).add(e)
    label = list(range(m))
    for cls in classes:
        cls = sorted(cls)
        objs = [e for i in cls for e in owner[i]]
        if len(objs) != len(set(objs)):
            raise ValueError("a gluing class holds two indices of one object")
        for i in cls:
            label[i] = cls[0]
    new = {lab: k for k, lab in enumerate(sorted(set(label)))}
    lab = [new[label[i]] for i in range(m)]
    A = IdempotentAlgebra(len(new), alpha.algebra.base)
    sup = np.zeros((len(G), A.m), dtype=bool)
    pm = -np.ones((len(G), A.m), dtype=np.int64)
    for g in range(len(G)):
        for i in alpha.S(g):
            sup[g, lab[i]] = True
        for i, j in alpha.pi(g).items():
            pm[g, lab[i]] = lab[j]
    return validate_action(PartialAction(G, A, sup, pm))


def relabel(alpha, sigma):
    """Move index ``i`` to ``sigma[i]``."""
    sigma = np.asarray(sigma)
    sup = np.zeros_like(alpha.support)
    pm = -np.ones_like(alpha.perm)
    sup[:, sigma] = alpha.support
    moved = np.where(alpha.perm >= 0, sigma[np.maximum(alpha.perm, 0)], -1)
    pm[:, sigma] = moved
    return validate_action(PartialAction(alpha.groupoid, alpha.algebra, sup, pm))


def random_action(seed, max_m=8, max_morphisms=16, *, orthogonal=None, global_=None, free=None, base=QQ):
    """Seeded random validated partial action with ``m <= max_m``.

    ``orthogonal``/``global_``/``free`` force the corresponding construction
    step on (True) or off (False); ``None`` leaves it to chance.
    """
    rng = np.random.default_rng(seed)
    for _ in range(200):
        want_free = bool(rng.integers(2)) if free is None else free
        beta = random_global_orthogonal(rng, max_morphisms, max_points=max_m, free=want_free, base=base)
        alpha = beta
        is_global = bool(rng.integers(2)) if global_ is None else global_
        if not is_global:
            p = rng.uniform(0.5, 1.0)
            keep = [i for i in range(beta.m) if rng.random() < p]
            if not keep:
                continue
            alpha = standard_restriction(beta, keep)
        do_glue = bool(rng.integers(2)) if orthogonal is None else not orthogonal
        if do_glue and len(alpha.groupoid.objects) > 1:
            alpha = glue(alpha, _random_classes(rng, alpha))
        if alpha.m > max_m:
            continue
        return relabel(alpha, rng.permutation(alpha.m))
    raise RuntimeError("could not draw an action within the size limits")


def _random_classes(rng, alpha):
    G = alpha.groupoid
    owner = {i: e for e in G.objects for i in alpha.S(e)}
    classes = {i: {i} for i in range(alpha.m)}
    objs = {i: {owner[i]} for i in range(alpha.m)}
    for _ in range(int(rng.integers(1, alpha.m + 1))):
        i, j = (int(x) for x in rng.integers(alpha.m, size=2))
        ri = next(k for k, c in classes.items() if i in c)
        rj = next(k for k, c in classes.items() if j in c)
        if ri == rj or objs[ri] & objs[rj]:
            continue
        classes[ri] |= classes.pop(rj)
        objs[ri] |= objs.pop(rj)
    return [c for c in classes.values() if len(c) > 1]
