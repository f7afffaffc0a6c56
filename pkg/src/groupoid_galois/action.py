"""Partial groupoid actions by idempotent permutations.

``alpha_g`` sends ``e_i`` to ``e_{perm[g, i]}`` for ``i`` in ``S_{g^-1}`` and is
extended R-linearly; ``A_g`` is the ideal generated by
``1_g = sum_{i in S_g} e_i``.  The representation is unital by construction.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import IdempotentAlgebra, RingElement
from .errors import ActionValidationError, BadFamily, NotWide, Violation
from .groupoid import FiniteGroupoid, Subgroupoid


@dataclass(frozen=True, eq=False)
class PartialAction:
    groupoid: FiniteGroupoid
    algebra: IdempotentAlgebra
    support: np.ndarray  # bool, (|G|, m)
    perm: np.ndarray  # int, (|G|, m); -1 off S_{g^-1}

    def __post_init__(self):
        s = np.array(self.support, dtype=bool)
        p = np.array(self.perm, dtype=np.int64)
        shape = (len(self.groupoid), self.algebra.m)
        if s.shape != shape or p.shape != shape:
            raise ValueError(f"support/perm must have shape {shape}")
        s.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "support", s)
        object.__setattr__(self, "perm", p)

    @property
    def m(self):
        return self.algebra.m

    def S(self, g):
        return frozenset(int(i) for i in np.flatnonzero(self.support[g]))

    def pi(self, g):
        row = self.perm[g]
        return {int(i): int(row[i]) for i in np.flatnonzero(row >= 0)}

    def unit(self, g):
        return self.algebra.indicator(self.S(g))

    def apply(self, g, a):
        """``alpha_g(a 1_{g^-1})``."""
        A = self.algebra
        out = [A.base.zero] * A.m
        for k, j in self.pi(g).items():
            out[j] = a.coeffs[k]
        return RingElement(A, tuple(out))

    def empty_supports(self):
        return [g for g in range(len(self.groupoid)) if not self.support[g].any()]

    def signature(self):
        """Name-keyed description; equal signatures mean equal actions."""
        G = self.groupoid
        return (
            self.algebra,
            tuple(sorted((G.names[g], tuple(sorted(self.S(g))), tuple(sorted(self.pi(g).items())))
                         for g in range(len(G)))),
        )

    def to_json(self, groupoid=None):
        G = self.groupoid
        return {
            "groupoid": G.to_json() if groupoid is None else groupoid,
            "m": self.m,
            "base": str(self.algebra.base),
            "support": {G.names[g]: [i + 1 for i in sorted(self.S(g))] for g in range(len(G))},
            "perm": {
                G.names[g]: [[i + 1, j + 1] for i, j in sorted(self.pi(g).items())]
                for g in range(len(G))
            },
        }


def build_action(groupoid, algebra, support, perm=None, validate=True):
    """Assemble from ``{g: indices}`` and ``{g: {i: j}}`` (0-based; g by name or index).

    Omitted permutations of identities default to the identity on ``S_e``.
    """
    G = groupoid
    n, m = len(G), algebra.m
    sup = np.zeros((n, m), dtype=bool)
    for g, idx in support.items():
        sup[G.index(g), list(idx)] = True
    pm = -np.ones((n, m), dtype=np.int64)
    given = set()
    for g, mp in (perm or {}).items():
        gi = G.index(g)
        given.add(gi)
        for i, j in dict(mp).items():
            pm[gi, i] = j
    for e in G.objects:
        if e not in given:
            idx = np.flatnonzero(sup[e])
            pm[e, idx] = idx
    act = PartialAction(G, algebra, sup, pm)
    return validate_action(act) if validate else act


def validate_action(action):
    """Check the ideal chain, bijectivity of each ``pi_g`` and (P1)-(P3)."""
    G, S, P = action.groupoid, action.support, action.perm
    names = G.names
    n, m = S.shape
    bad = []

    for g in range(n):
        dom_ok = np.array_equal(P[g] >= 0, S[G.inv[g]])
        img = P[g][P[g] >= 0]
        if not dom_ok or len(set(img.tolist())) != len(img) or np.any(img >= m) or not np.array_equal(
            np.isin(np.arange(m), img), S[g]
        ):
            bad.append(Violation("NotBijective", "pi_g is not a bijection S_{g^-1} -> S_g", (names[g],)))
        if np.any(S[g] & ~S[G.ran[g]]):
            i = int(np.flatnonzero(S[g] & ~S[G.ran[g]])[0])
            bad.append(Violation("IdealChain", "S_g not inside S_{r(g)}", (names[g], i + 1)))

    for e in G.objects:
        idx = np.flatnonzero(S[e])
        if not np.array_equal(P[e][idx], idx):
            bad.append(Violation("P1Identity", "pi_e is not the identity", (names[e],)))
    covered = S[list(G.objects)].any(axis=0) if G.objects else np.zeros(m, dtype=bool)
    for i in np.flatnonzero(~covered):
        bad.append(Violation("P1Covering", "index outside every S_e", (int(i) + 1,)))

    if any(v.kind == "NotBijective" for v in bad):
        raise ActionValidationError(bad)

    for g in range(n):
        for h in range(n):
            gh = G.comp[g, h]
            if gh < 0:
                continue
            for i in np.flatnonzero(P[h] >= 0):
                j = P[h, i]
                # i in pi_h^{-1}(S_{g^-1} ∩ S_h)
                if not S[G.inv[g], j]:
                    continue
                if not S[G.inv[gh], i]:
                    bad.append(Violation("P2", "pi_h^{-1}(S_{g^-1} ∩ S_h) not in S_{(gh)^-1}",
                                         (names[g], names[h], int(i) + 1)))
                elif P[g, j] != P[gh, i]:
                    bad.append(Violation("P3", "pi_g pi_h != pi_gh", (names[g], names[h], int(i) + 1)))
    if bad:
        raise ActionValidationError(bad)
    return action


def prop22_check(action):
    """``pi_{g^-1} = pi_g^{-1}`` and ``pi_g(S_{g^-1} ∩ S_h) = S_g ∩ S_gh`` on composable pairs."""
    G = action.groupoid
    for g in range(len(G)):
        fwd = action.pi(g)
        back = action.pi(int(G.inv[g]))
        if {j: i for i, j in fwd.items()} != back:
            return False
    for g in range(len(G)):
        pg = action.pi(g)
        for h in range(len(G)):
            gh = G.comp[g, h]
            if gh < 0:
                continue
            lhs = {pg[i] for i in action.S(int(G.inv[g])) & action.S(h)}
            if lhs != action.S(g) & action.S(int(gh)):
                return False
    return True


def predicates(action):
    G = action.groupoid
    objs = list(G.objects)
    counts = action.support[objs].sum(axis=0)
    orthogonal = bool(np.all(counts <= 1))
    is_global = all(np.array_equal(action.support[g], action.support[G.ran[g]]) for g in range(len(G)))
    # every A_g is generated by the central idempotent 1_g in this model
    return {"orthogonal": orthogonal, "global": is_global, "unital": True, "preunital": True}


def restrict(action, H):
    """The action restricted to the wide subgroupoid ``H``, as an action of ``H`` itself."""
    if not isinstance(H, Subgroupoid):
        H = Subgroupoid.of(action.groupoid, H)
    if not H.is_wide or not H.is_subgroupoid:
        raise NotWide(f"{H.label()} is not a wide subgroupoid")
    sub, parent = H.as_groupoid()
    return validate_action(PartialAction(sub, action.algebra, action.support[parent], action.perm[parent]))


def check_equivalence(family, alpha, eps):
    """Index-level equivalence ``phi_{r(g)}(S_g) = S'_g`` and ``phi_r pi_g = pi'_g phi_d``.

    ``family`` maps each object (name or index) to a dict ``{i: j}`` that must be a
    bijection ``S_e -> S'_e``; otherwise :class:`BadFamily` is raised.
    """
    G = alpha.groupoid
    if not G.same_table(eps.groupoid):
        raise BadFamily("actions of different groupoids")
    phi = {}
    for e, mp in family.items():
        phi[G.index(e)] = {int(i): int(j) for i, j in dict(mp).items()}
    if set(phi) != set(G.objects):
        raise BadFamily("need one map per object")
    for e, mp in phi.items():
        if set(mp) != alpha.S(e) or sorted(mp.values()) != sorted(eps.S(e)):
            raise BadFamily(f"map at {G.names[e]} is not a bijection S_e -> S'_e")
    for g in range(len(G)):
        r, d = int(G.ran[g]), int(G.dom[g])
        if {phi[r][i] for i in alpha.S(g)} != eps.S(g):
            return False
        pe = eps.pi(g)
        for i, j in alpha.pi(g).items():
            if phi[r][j] != pe.get(phi[d][i]):
                return False
    return True
