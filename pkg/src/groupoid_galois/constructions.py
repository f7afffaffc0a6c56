"""Orthogonalization, globalization and standard restriction.

The globalization is built as a quotient of "germs" ``(h, i)`` (the idempotent
``beta_h(e_i)`` for ``e_i`` in ``A_{d(h)}``); whatever construction is used,
the result is accepted only after (G1)-(G4) are checked clause by clause.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .action import PartialAction, check_equivalence, predicates, validate_action
from .algebra import IdempotentAlgebra, PartitionSubalgebra, RingElement
from .errors import ActionValidationError, GlobalizationVerificationFailed


@dataclass(frozen=True, eq=False)
class Orthogonalization:
    source: PartialAction
    action: PartialAction  # epsilon on E
    tags: tuple  # E-index -> (object, source index)
    embeddings: dict  # object -> {source index: E-index}

    @property
    def algebra(self):
        return self.action.algebra

    def phi(self, a):
        """``a -> (phi_e(a 1_e))_e``."""
        return RingElement(self.algebra, tuple(a.coeffs[i] for _, i in self.tags))

    @cached_property
    def image(self):
        """``phi(A)`` as a partition subalgebra of E."""
        return self.image_of(PartitionSubalgebra.discrete(self.source.algebra))

    def image_of(self, C):
        """``phi(C)`` for a partition subalgebra ``C`` of A."""
        return PartitionSubalgebra.from_labels(self.algebra, [C.block_of(i) for _, i in self.tags])

    def pullback(self, T):
        """``phi^{-1}(T)`` for ``T`` inside ``phi(A)``."""
        labels = {}
        for k, (_, i) in enumerate(self.tags):
            lab = T.block_of(k)
            if labels.setdefault(i, lab) != lab:
                raise ValueError("subalgebra is not contained in phi(A)")
        A = self.source.algebra
        return PartitionSubalgebra.from_labels(A, [labels[i] for i in range(A.m)])


def orthogonalize(alpha):
    """``E = prod_e A_e`` with ``E_g = phi_{r(g)}(A_g)`` and ``eps_g = phi_r alpha_g phi_d^{-1}``."""
    G = alpha.groupoid
    tags = []
    emb = {}
    for e in G.objects:
        emb[e] = {}
        for i in sorted(alpha.S(e)):
            emb[e][i] = len(tags)
            tags.append((e, i))
    E = IdempotentAlgebra(len(tags), alpha.algebra.base)
    n = len(G)
    sup = np.zeros((n, E.m), dtype=bool)
    pm = -np.ones((n, E.m), dtype=np.int64)
    for g in range(n):
        r, d = int(G.ran[g]), int(G.dom[g])
        for i in alpha.S(g):
            sup[g, emb[r][i]] = True
        for i, j in alpha.pi(g).items():
            pm[g, emb[d][i]] = emb[r][j]
    eps = validate_action(PartialAction(G, E, sup, pm))
    if not predicates(eps)["orthogonal"] or not check_equivalence(emb, alpha, eps):
        raise AssertionError("orthogonalization is not an orthogonal equivalent action")
    return Orthogonalization(alpha, eps, tuple(tags), emb)


@dataclass
class GlobalizationReport:
    clauses: dict = field(default_factory=dict)  # clause -> list of witnesses

    @property
    def ok(self):
        return all(not w for w in self.clauses.values())

    def failed(self):
        return sorted(k for k, w in self.clauses.items() if w)

    def as_dict(self):
        return {k: {"pass": not w, "witnesses": [list(map(str, x)) for x in w[:10]]}
                for k, w in sorted(self.clauses.items())}


@dataclass(frozen=True, eq=False)
class Globalization:
    source: PartialAction
    action: PartialAction  # beta on B
    embeddings: dict  # object -> {source index: B-index}
    classes: tuple  # B-index -> tuple of germs (h, i)

    @property
    def algebra(self):
        return self.action.algebra


def globalize(alpha, order_seed=None):
    """Globalization by germ quotient, post-verified against (G1)-(G4).

    ``order_seed`` shuffles germ processing and class numbering; any seed
    gives an isomorphic result.
    """
    G = alpha.groupoid
    n = len(G)
    germs = [(h, i) for h in range(n) for i in sorted(alpha.S(int(G.dom[h])))]
    if order_seed is not None:
        rng = np.random.default_rng(order_seed)
        germs = [germs[k] for k in rng.permutation(len(germs))]
    gid = {x: k for k, x in enumerate(germs)}
    parent = list(range(len(germs)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pis = [alpha.pi(g) for g in range(n)]
    # (h, j) ~ (h', i') when i' in S_{k^-1} and pi_k(i') = j, for k = h^{-1} h'
    for hp, ip in germs:
        for h in range(n):
            if G.ran[h] != G.ran[hp]:
                continue
            k = int(G.comp[G.inv[h], hp])
            j = pis[k].get(ip)
            if j is not None:
                a, b = find(gid[(h, j)]), find(gid[(hp, ip)])
                if a != b:
                    parent[max(a, b)] = min(a, b)

    by_root = {}
    for x in range(len(germs)):
        by_root.setdefault(find(x), []).append(germs[x])
    classes = [tuple(sorted(c)) for c in by_root.values()]
    obj_of = lambda c: int(G.ran[c[0][0]])  # noqa: E731
    if order_seed is None:
        classes.sort(key=lambda c: (obj_of(c), c[0]))
    else:
        classes.sort(key=lambda c: obj_of(c))
    cls = {x: k for k, c in enumerate(classes) for x in c}

    B = IdempotentAlgebra(len(classes), alpha.algebra.base)
    sup = np.zeros((n, B.m), dtype=bool)
    pm = -np.ones((n, B.m), dtype=np.int64)
    for g in range(n):
        for k, c in enumerate(classes):
            if obj_of(c) == G.ran[g]:
                sup[g, k] = True
            if obj_of(c) != G.dom[g]:
                continue
            images = {cls[(int(G.comp[g, h]), i)] for h, i in c}
            if len(images) != 1:
                raise GlobalizationVerificationFailed(
                    f"germ class {c} has several images under {G.names[g]}"
                )
            pm[g, k] = images.pop()
    try:
        beta = validate_action(PartialAction(G, B, sup, pm))
    except ActionValidationError as exc:
        raise GlobalizationVerificationFailed(f"germ quotient is not an action: {exc}") from exc
    emb = {e: {i: cls[(e, i)] for i in sorted(alpha.S(e))} for e in G.objects}
    report = verify_globalization(alpha, beta, emb)
    if not report.ok:
        raise GlobalizationVerificationFailed(f"failed clauses {report.failed()}", report)
    return Globalization(alpha, beta, emb, tuple(classes))


def verify_globalization(alpha, beta, embeddings):
    """Check (G1)-(G4), plus that beta is a global action and each phi_e is injective."""
    G = alpha.groupoid
    rep = GlobalizationReport({k: [] for k in ("global", "mono", "G1", "G2", "G3", "G4")})
    try:
        validate_action(beta)
        if not predicates(beta)["global"]:
            rep.clauses["global"].append(("not global",))
    except ActionValidationError as exc:
        rep.clauses["global"].append(("invalid", str(exc)))
        return rep
    phi = {G.index(e): {int(i): int(k) for i, k in dict(mp).items()} for e, mp in embeddings.items()}
    for e in G.objects:
        mp = phi.get(e, {})
        if set(mp) != alpha.S(e) or len(set(mp.values())) != len(mp):
            rep.clauses["mono"].append((G.names[e],))
    if rep.clauses["mono"]:
        return rep
    for e in G.objects:
        for i, k in phi[e].items():
            if not beta.support[e, k]:
                rep.clauses["G1"].append((G.names[e], i + 1))
    pb = [beta.pi(g) for g in range(len(G))]
    for g in range(len(G)):
        r, d = int(G.ran[g]), int(G.dom[g])
        lhs = {phi[r][i] for i in alpha.S(g)}
        moved = {pb[g].get(phi[d][i]) for i in alpha.S(d)}
        if lhs != set(phi[r].values()) & moved:
            rep.clauses["G2"].append((G.names[g],))
        for i, j in alpha.pi(g).items():
            if pb[g].get(phi[d][i]) != phi[r][j]:
                rep.clauses["G3"].append((G.names[g], i + 1))
        span = set()
        for h in range(len(G)):
            if G.ran[h] == r:
                span |= {pb[h].get(phi[int(G.dom[h])][i]) for i in alpha.S(int(G.dom[h]))}
        if span != beta.S(g):
            rep.clauses["G4"].append((G.names[g],))
    return rep


def standard_restriction(beta, indices):
    """Restrict ``beta`` to the ideal spanned by ``indices`` (sorted, renumbered from 0).

    ``E_g = E_{r(g)} ∩ beta_g(E_{d(g)})`` with ``E_e = B_e ∩ E``.
    """
    G = beta.groupoid
    keep = sorted(set(int(k) for k in indices))
    local = {k: t for t, k in enumerate(keep)}
    E = IdempotentAlgebra(len(keep), beta.algebra.base)
    n = len(G)
    sup = np.zeros((n, E.m), dtype=bool)
    pm = -np.ones((n, E.m), dtype=np.int64)
    in_obj = {e: beta.S(e) & set(keep) for e in G.objects}
    for g in range(n):
        r, d = int(G.ran[g]), int(G.dom[g])
        pg = beta.pi(g)
        for k in in_obj[d]:
            j = pg.get(k)
            if j is not None and j in in_obj[r]:
                sup[g, local[j]] = True
                pm[g, local[k]] = local[j]
    return validate_action(PartialAction(G, E, sup, pm))


def globalization_isomorphism(g1, g2):
    """An index bijection B1 -> B2 commuting with beta and the embeddings, or None."""
    b1, b2 = g1.action, g2.action
    G = b1.groupoid
    if b1.m != b2.m or not G.same_table(b2.groupoid):
        return None
    psi = {}
    todo = []
    for e in G.objects:
        for i, k in g1.embeddings[e].items():
            if psi.setdefault(k, g2.embeddings[e][i]) != g2.embeddings[e][i]:
                return None
            todo.append(k)
    p1 = [b1.pi(g) for g in range(len(G))]
    p2 = [b2.pi(g) for g in range(len(G))]
    while todo:
        k = todo.pop()
        for g in range(len(G)):
            if k in p1[g]:
                if psi[k] not in p2[g]:
                    return None
                a, b = p1[g][k], p2[g][psi[k]]
                if a not in psi:
                    psi[a] = b
                    todo.append(a)
                elif psi[a] != b:
                    return None
    if len(psi) != b1.m or len(set(psi.values())) != b1.m:
        return None
    for g in range(len(G)):
        if {psi[k] for k in b1.S(g)} != b2.S(g):
            return None
    return psi
