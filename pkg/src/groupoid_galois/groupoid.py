"""Finite groupoids as dense composition tables.

Morphisms are integers ``0..n-1``; objects are identified with their
identity morphisms.  ``comp[g, h]`` is the product ``gh`` (first ``h``, then
``g``), defined iff ``dom(g) == ran(h)``, and ``-1`` otherwise.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product as iproduct

import numpy as np

from . import _kernels
from .errors import (
    CapExceeded,
    EnumerationInconsistent,
    GroupoidValidationError,
    NotAnObject,
    NotConnected,
    Violation,
)

DEFAULT_CAP = 2**20


def _frozen(a):
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    names: tuple
    dom: np.ndarray
    ran: np.ndarray
    inv: np.ndarray
    comp: np.ndarray

    def __post_init__(self):
        for field in ("dom", "ran", "inv", "comp"):
            object.__setattr__(self, field, _frozen(getattr(self, field)))
        object.__setattr__(self, "names", tuple(self.names))

    def __len__(self):
        return len(self.names)

    def __repr__(self):
        return f"<FiniteGroupoid |G|={len(self)} |G0|={len(self.objects)}>"

    @cached_property
    def objects(self):
        return tuple(int(i) for i in range(len(self)) if self.dom[i] == i and self.ran[i] == i)

    @cached_property
    def _index(self):
        return {name: i for i, name in enumerate(self.names)}

    def index(self, g):
        if isinstance(g, (int, np.integer)):
            if not 0 <= g < len(self):
                raise KeyError(g)
            return int(g)
        return self._index[g]

    def compose(self, g, h):
        c = int(self.comp[g, h])
        return None if c < 0 else c

    def is_object(self, g):
        return self.dom[g] == g and self.ran[g] == g

    def hom(self, x, y):
        """Morphisms with domain ``x`` and range ``y``."""
        return [g for g in range(len(self)) if self.dom[g] == x and self.ran[g] == y]

    def star(self, e):
        """``G(-, e)``: morphisms with range ``e``."""
        return [g for g in range(len(self)) if self.ran[g] == e]

    def is_connected(self):
        return len(connected_components(self)) <= 1

    def same_table(self, other):
        return (
            self.names == other.names
            and np.array_equal(self.dom, other.dom)
            and np.array_equal(self.ran, other.ran)
            and np.array_equal(self.inv, other.inv)
            and np.array_equal(self.comp, other.comp)
        )

    def induced(self, members):
        """Full sub-table on ``members`` (must be closed); returns (groupoid, parent indices)."""
        idx = np.array(sorted(int(g) for g in members), dtype=np.int64)
        local = -np.ones(len(self) + 1, dtype=np.int64)
        local[idx] = np.arange(len(idx))
        sub = self.comp[np.ix_(idx, idx)]
        sub = np.where(sub >= 0, local[sub], -1)
        g = FiniteGroupoid(
            names=[self.names[i] for i in idx],
            dom=local[self.dom[idx]],
            ran=local[self.ran[idx]],
            inv=local[self.inv[idx]],
            comp=sub,
        )
        return g, idx

    def to_json(self):
        n = len(self)
        return {
            "objects": [self.names[e] for e in self.objects],
            "morphisms": [
                {
                    "id": self.names[g],
                    "dom": self.names[self.dom[g]],
                    "ran": self.names[self.ran[g]],
                    "inv": self.names[self.inv[g]],
                }
                for g in range(n)
            ],
            "compose": [
                [self.names[g], self.names[h], self.names[self.comp[g, h]]]
                for g in range(n)
                for h in range(n)
                if self.comp[g, h] >= 0
            ],
        }


def from_operation(names, dom, ran, inv, mul):
    """Build a groupoid from index arrays and ``mul(g, h) -> index`` (only called when defined)."""
    n = len(names)
    comp = -np.ones((n, n), dtype=np.int64)
    for g in range(n):
        for h in range(n):
            if dom[g] == ran[h]:
                comp[g, h] = mul(g, h)
    return FiniteGroupoid(names, dom, ran, inv, comp)


# -- validation ----------------------------------------------------------------

def validate_groupoid(raw):
    """Parse a groupoid table (JSON shape) and check every groupoid axiom.

    Raises :class:`GroupoidValidationError` listing all violations found.
    """
    violations = []
    try:
        objects = [str(o) for o in raw["objects"]]
        morphisms = list(raw["morphisms"])
        triples = list(raw.get("compose", []))
    except (KeyError, TypeError) as exc:
        raise GroupoidValidationError([Violation("Malformed", f"missing field {exc}")]) from None

    names = []
    for m in morphisms:
        if not isinstance(m, dict) or "id" not in m:
            violations.append(Violation("Malformed", "morphism entry without id", (repr(m),)))
            continue
        names.append(str(m["id"]))
    if len(set(names)) != len(names):
        dup = sorted({x for x in names if names.count(x) > 1})
        violations.append(Violation("Malformed", "duplicate morphism ids", tuple(dup)))
    if violations:
        raise GroupoidValidationError(violations)

    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    object_set = set()
    for o in objects:
        if o not in index:
            violations.append(Violation("BadIdentity", "object is not a morphism", (o,)))
        else:
            object_set.add(index[o])

    dom = -np.ones(n, dtype=np.int64)
    ran = -np.ones(n, dtype=np.int64)
    inv = -np.ones(n, dtype=np.int64)
    for i, m in enumerate(morphisms):
        for key, arr in (("dom", dom), ("ran", ran)):
            val = m.get(key)
            if val is None or str(val) not in index or index[str(val)] not in object_set:
                violations.append(Violation("BadIdentity", f"{key} is not an object", (names[i], val)))
            else:
                arr[i] = index[str(val)]
        val = m.get("inv")
        if val is None or str(val) not in index:
            violations.append(Violation("MissingInverse", "no inverse given", (names[i],)))
        else:
            inv[i] = index[str(val)]

    comp = -np.ones((n, n), dtype=np.int64)
    for t in triples:
        try:
            l, r, res = (index[str(x)] for x in t)
        except (KeyError, ValueError, TypeError):
            violations.append(Violation("Malformed", "compose entry names unknown morphism", tuple(map(str, t))))
            continue
        if comp[l, r] >= 0 and comp[l, r] != res:
            violations.append(
                Violation("Malformed", "conflicting compose entries", (names[l], names[r]))
            )
        comp[l, r] = res

    if violations:
        # later checks index through dom/ran/inv and need them all present
        raise GroupoidValidationError(violations)

    for o in sorted(object_set):
        if dom[o] != o or ran[o] != o:
            violations.append(Violation("BadIdentity", "identity with foreign dom/ran", (names[o],)))
        if inv[o] != o:
            violations.append(Violation("BadIdentity", "identity is not self-inverse", (names[o],)))

    for g in range(n):
        for h in range(n):
            defined = comp[g, h] >= 0
            should = dom[g] == ran[h]
            if defined and not should:
                violations.append(
                    Violation("CompositionDomainMismatch", "product given for non-composable pair",
                              (names[g], names[h]))
                )
            elif should and not defined:
                violations.append(
                    Violation("CompositionDomainMismatch", "product missing for composable pair",
                              (names[g], names[h]))
                )
            elif defined:
                c = comp[g, h]
                if dom[c] != dom[h] or ran[c] != ran[g]:
                    violations.append(
                        Violation("CompositionDomainMismatch", "product has wrong dom/ran",
                                  (names[g], names[h], names[c]))
                    )

    for g in range(n):
        if comp[g, dom[g]] != g or comp[ran[g], g] != g:
            violations.append(Violation("BadIdentity", "identity does not act neutrally", (names[g],)))
        i = inv[g]
        if dom[i] != ran[g] or ran[i] != dom[g] or comp[i, g] != dom[g] or comp[g, i] != ran[g]:
            violations.append(Violation("MissingInverse", "inv(g) is not a two-sided inverse",
                                        (names[g], names[i])))

    violations.extend(_associativity_violations(comp, names))
    if violations:
        raise GroupoidValidationError(violations)
    return FiniteGroupoid(names, dom, ran, inv, comp)


def _associativity_violations(comp, names):
    n = comp.shape[0]
    pad = -np.ones((n + 1, n + 1), dtype=np.int64)
    pad[:n, :n] = comp
    out = []
    ks = np.arange(n)
    for g in range(n):
        gh = pad[g, :n]  # over h
        left = pad[gh[:, None], ks[None, :]]  # (gh)k
        right = pad[g, pad[:n, :n]]  # g(hk), indexed [h, k]
        bad = np.argwhere((left >= 0) & (right >= 0) & (left != right))
        for h, k in bad:
            out.append(Violation("NonAssociative", "(gh)k != g(hk)", (names[g], names[h], names[k])))
    return out


# -- builders ------------------------------------------------------------------

def coarse_groupoid(n, labels=None):
    """The coarse groupoid on ``n`` objects; morphism ``(s,t)`` has dom ``s`` and ran ``t``."""
    if n < 1:
        raise ValueError("coarse groupoid needs n >= 1")
    labels = [str(k + 1) for k in range(n)] if labels is None else [str(x) for x in labels]
    if len(labels) != n:
        raise ValueError("need one label per object")
    names = [f"({labels[s]},{labels[t]})" for s in range(n) for t in range(n)]
    idx = lambda s, t: s * n + t  # noqa: E731
    dom = [idx(s, s) for s in range(n) for t in range(n)]
    ran = [idx(t, t) for s in range(n) for t in range(n)]
    inv = [idx(t, s) for s in range(n) for t in range(n)]
    # (s,t)(u,v) = (u,t) when s = v
    return from_operation(names, dom, ran, inv, lambda g, h: idx(h // n, g % n))


def discrete_groupoid(labels):
    if isinstance(labels, int):
        labels = [f"e{k + 1}" for k in range(labels)]
    n = len(labels)
    r = list(range(n))
    return from_operation(list(labels), r, r, r, lambda g, h: g)


def group_from_permutations(elements):
    """One-object groupoid from ``{name: permutation tuple}`` (0-based images).

    Composition is ``(ab)(x) = a(b(x))``; the set must be closed.
    """
    names = list(elements)
    perms = [tuple(int(x) for x in elements[k]) for k in names]
    lookup = {p: i for i, p in enumerate(perms)}
    if len(lookup) != len(perms):
        raise ValueError("repeated permutation")
    ident = tuple(range(len(perms[0])))
    if ident not in lookup:
        raise ValueError("identity permutation missing")
    e = lookup[ident]

    def mul(a, b):
        p = tuple(perms[a][perms[b][x]] for x in range(len(ident)))
        if p not in lookup:
            raise ValueError("permutations are not closed under composition")
        return lookup[p]

    def inverse(a):
        q = [0] * len(ident)
        for x, y in enumerate(perms[a]):
            q[y] = x
        return lookup[tuple(q)]

    n = len(names)
    return from_operation(names, [e] * n, [e] * n, [inverse(a) for a in range(n)], mul)


def cyclic_group(k, identity="1", gen="g"):
    names = [identity] + [gen if j == 1 else f"{gen}^{j}" for j in range(1, k)]
    return group_from_permutations(
        {names[j]: tuple((x + j) % k for x in range(k)) for j in range(k)}
    )


def klein_four():
    """{1, g, h, gh} acting on 8 points (0-based)."""
    return group_from_permutations(
        {
            "1": (0, 1, 2, 3, 4, 5, 6, 7),
            "g": (1, 0, 3, 2, 5, 4, 7, 6),
            "h": (2, 3, 0, 1, 6, 7, 4, 5),
            "gh": (3, 2, 1, 0, 7, 6, 5, 4),
        }
    )


def symmetric_group_3():
    names = {}
    for p in permutations(range(3)):
        names["".join(str(x + 1) for x in p)] = p
    return group_from_permutations(names)


def product(G1, G2, name=None):
    """Direct product with componentwise composition; index ``a * |G2| + b``."""
    n2 = len(G2)
    if name is None:
        name = lambda a, b: f"({a},{b})"  # noqa: E731
    pairs = list(iproduct(range(len(G1)), range(n2)))
    names = [name(G1.names[a], G2.names[b]) for a, b in pairs]
    dom = [G1.dom[a] * n2 + G2.dom[b] for a, b in pairs]
    ran = [G1.ran[a] * n2 + G2.ran[b] for a, b in pairs]
    inv = [G1.inv[a] * n2 + G2.inv[b] for a, b in pairs]

    def mul(x, y):
        a, b = divmod(x, n2)
        c, d = divmod(y, n2)
        return G1.comp[a, c] * n2 + G2.comp[b, d]

    return from_operation(names, dom, ran, inv, mul)


def product_with_group(coarse, group):
    """``A_n x G``; morphisms are named ``(s,t,x)``."""
    if len(group.objects) != 1:
        raise ValueError("second factor must be a group (one object)")
    if not coarse.is_connected() or any(
        len(isotropy_members(coarse, e)) != 1 for e in coarse.objects
    ):
        raise ValueError("first factor must be a coarse groupoid")

    def name(a, b):
        inner = a[1:-1] if a.startswith("(") and a.endswith(")") else a
        return f"({inner},{b})"

    return product(coarse, group, name)


def disjoint_union(*parts):
    names, dom, ran, inv = [], [], [], []
    offsets = []
    off = 0
    for G in parts:
        offsets.append(off)
        names += list(G.names)
        dom += [x + off for x in G.dom]
        ran += [x + off for x in G.ran]
        inv += [x + off for x in G.inv]
        off += len(G)
    if len(set(names)) != len(names):
        raise ValueError("disjoint union needs distinct morphism names")
    comp = -np.ones((off, off), dtype=np.int64)
    for G, o in zip(parts, offsets):
        n = len(G)
        comp[o : o + n, o : o + n] = np.where(G.comp >= 0, G.comp + o, -1)
    return FiniteGroupoid(names, dom, ran, inv, comp)


# -- subgroupoids ----------------------------------------------------------------

@dataclass(frozen=True)
class Subgroupoid:
    parent: FiniteGroupoid
    members: frozenset

    @classmethod
    def of(cls, parent, members):
        return cls(parent, frozenset(parent.index(g) for g in members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, g):
        return g in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __le__(self, other):
        return self.members <= other.members

    @property
    def mask(self):
        m = np.zeros(len(self.parent), dtype=bool)
        m[list(self.members)] = True
        return m

    @property
    def sort_key(self):
        return (len(self.members), tuple(sorted(self.members)))

    @property
    def is_wide(self):
        return set(self.parent.objects) <= self.members

    @property
    def is_subgroupoid(self):
        return is_closed(self.parent, self.members)

    @property
    def names(self):
        return [self.parent.names[g] for g in sorted(self.members)]

    def label(self):
        G = self.parent
        objs = set(G.objects)
        if self.members == objs:
            return "𝒢₀"
        if len(self.members) == len(G):
            return "𝒢"
        rest = [G.names[g] for g in sorted(self.members - objs)]
        head = "𝒢₀ ∪ " if objs <= self.members else ""
        return head + "{" + ", ".join(rest) + "}"

    def as_groupoid(self):
        return self.parent.induced(self.members)


WideSubgroupoid = Subgroupoid


def is_closed(G, members):
    mask = np.zeros(len(G), dtype=bool)
    mask[list(members)] = True
    return bool(np.array_equal(_kernels.closure(G.comp, G.inv, mask), mask))


def _from_mask(G, mask):
    return Subgroupoid(G, frozenset(int(i) for i in np.flatnonzero(mask)))


def generated_wide_subgroupoid(G, S=()):
    """Least wide subgroupoid containing ``S``."""
    mask = np.zeros(len(G), dtype=bool)
    mask[list(G.objects)] = True
    for g in S:
        mask[G.index(g)] = True
    return _from_mask(G, _kernels.closure(G.comp, G.inv, mask))


def enumerate_wide_subgroupoids(G, cap=DEFAULT_CAP):
    """All wide subgroupoids, sorted by size then member indices.

    Worklist closure: every wide subgroupoid is reached from ``G0`` by
    adjoining its elements one at a time.  ``cap`` bounds the number of
    candidate closures computed.
    """
    comp, inv = G.comp, G.inv
    start = np.zeros(len(G), dtype=bool)
    start[list(G.objects)] = True
    start = _kernels.closure(comp, inv, start)
    seen = {start.tobytes(): start}
    frontier = [start]
    candidates = 1
    while frontier:
        nxt = []
        for mask in frontier:
            for g in np.flatnonzero(~mask):
                candidates += 1
                if candidates > cap:
                    raise CapExceeded(f"more than {cap} candidate sets")
                trial = mask.copy()
                trial[g] = True
                closed = _kernels.closure(comp, inv, trial)
                key = closed.tobytes()
                if key not in seen:
                    seen[key] = closed
                    nxt.append(closed)
        frontier = nxt
    subs = [_from_mask(G, m) for m in seen.values()]
    return sorted(subs, key=lambda s: s.sort_key)


def brute_force_wide_subgroupoids(G):
    """Filter every superset of ``G0``; exponential, used as an oracle."""
    base = np.array(G.objects, dtype=np.int64)
    free = np.array([g for g in range(len(G)) if g not in set(G.objects)], dtype=np.int64)
    bits = _kernels.closed_subsets(G.comp, G.inv, base, free)
    subs = [
        Subgroupoid(G, frozenset(g for g in range(len(G)) if (int(b) >> g) & 1))
        for b in bits
    ]
    return sorted(subs, key=lambda s: s.sort_key)


# -- structure -------------------------------------------------------------------

def connected_components(G):
    """Full subgroupoids on the classes of ``e1 ~ e2 iff G(e1, e2)`` is nonempty."""
    n = len(G)
    if n == 0:
        return []
    # each morphism joins its domain and range
    labels = _kernels.orbit_labels(n, np.concatenate([np.arange(n), np.arange(n)]),
                                   np.concatenate([G.dom, G.ran]))
    classes = {}
    for g in range(n):
        classes.setdefault(int(labels[g]), set()).add(g)
    comps = [Subgroupoid(G, frozenset(s)) for s in classes.values()]
    return sorted(comps, key=lambda s: min(s.members))


def _as_object(G, e):
    e = G.index(e)
    if not G.is_object(e):
        raise NotAnObject(G.names[e])
    return e


def isotropy_members(G, e):
    return [g for g in range(len(G)) if G.dom[g] == e and G.ran[g] == e]


def isotropy_group(G, e):
    """``G(e)`` as a one-object groupoid (re-validated)."""
    e = _as_object(G, e)
    sub, _ = G.induced(isotropy_members(G, e))
    return validate_groupoid(sub.to_json())


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Explicit isomorphism ``G -> A_n x G(base)`` for a connected ``G``."""

    n: int
    objects: tuple  # e_1..e_n, parent indices
    base: int
    isotropy: FiniteGroupoid
    isotropy_parent: np.ndarray  # local isotropy index -> parent index
    transport: tuple  # per object: a morphism base -> object
    product: FiniteGroupoid
    iso: np.ndarray  # parent index -> product index

    def coords(self, g):
        """``(s, t, a)``: positions of dom/ran in ``objects`` and local isotropy index."""
        m = len(self.isotropy)
        st, a = divmod(int(self.iso[g]), m)
        s, t = divmod(st, self.n)
        return s, t, a

    @cached_property
    def inverse(self):
        out = np.empty_like(self.iso)
        out[self.iso] = np.arange(len(self.iso))
        return out

    def morphism(self, s, t, a):
        m = len(self.isotropy)
        return int(self.inverse[(s * self.n + t) * m + a])


def connected_decomposition(G):
    if not G.is_connected():
        raise NotConnected("groupoid has more than one connected component")
    objects = tuple(G.objects)
    n = len(objects)
    pos = {e: k for k, e in enumerate(objects)}
    base = objects[0]
    iso_members = isotropy_members(G, base)
    H, H_parent = G.induced(iso_members)
    local = {int(p): k for k, p in enumerate(H_parent)}
    transport = tuple(min(G.hom(base, x)) for x in objects)
    coarse = coarse_groupoid(n, labels=[G.names[e] for e in objects])
    P = product_with_group(coarse, H)
    m = len(H)
    iso = np.empty(len(G), dtype=np.int64)
    for g in range(len(G)):
        x, y = int(G.dom[g]), int(G.ran[g])
        # a = t_y^{-1} g t_x lies in G(base)
        a = G.comp[G.inv[transport[pos[y]]], G.comp[g, transport[pos[x]]]]
        iso[g] = (pos[x] * n + pos[y]) * m + local[int(a)]
    D = Decomposition(n, objects, base, H, H_parent, transport, P, iso)
    _verify_isomorphism(G, P, iso)
    return D


def _verify_isomorphism(G, P, iso):
    if len(G) != len(P) or len(set(iso.tolist())) != len(G):
        raise AssertionError("decomposition map is not a bijection")
    mapped = np.where(G.comp >= 0, iso[np.maximum(G.comp, 0)], -1)
    if not np.array_equal(P.comp[np.ix_(iso, iso)], mapped):
        raise AssertionError("decomposition map does not preserve composition")


def is_isomorphism(G, P, iso):
    try:
        _verify_isomorphism(G, P, np.asarray(iso))
    except AssertionError:
        return False
    return True


@dataclass(frozen=True)
class CanonicalEnumeration:
    object: int
    morphisms: tuple  # g_{e,1}, ..., g_{e,n_e}
    qr: tuple  # (q, r) with j = q*n + r + 1


def canonical_enumeration(G, e):
    """Enumerate ``G(-, e)`` as ``(e_{s^r(i)}, e_i, g_q)`` with ``s`` the cyclic shift ``i -> i-1``."""
    e = _as_object(G, e)
    D = connected_decomposition(G)
    n, m = D.n, len(D.isotropy)
    i = D.objects.index(e) + 1
    ident = int(D.isotropy.objects[0])
    group_order = [ident] + [a for a in range(m) if a != ident]
    morphisms, qr = [], []
    for j in range(1, n * m + 1):
        q, r = divmod(j - 1, n)
        s = (i - 1 - r) % n + 1
        morphisms.append(D.morphism(s - 1, i - 1, group_order[q]))
        qr.append((q, r))
    return CanonicalEnumeration(e, tuple(morphisms), tuple(qr))


def canonical_enumeration_family(G):
    """One canonical enumeration per object, built component by component."""
    family = {}
    for comp in connected_components(G):
        sub, parent = comp.as_groupoid()
        for e in sub.objects:
            ce = canonical_enumeration(sub, e)
            family[int(parent[e])] = tuple(int(parent[g]) for g in ce.morphisms)
    return family


def check_condition_superfluous(G, family):
    """True iff ``g_{r(g),i}^{-1} g g_{d(g),i} in G0`` forces ``g in G0`` for all ``g, i``."""
    objs = set(G.objects)
    if set(family) != objs:
        raise EnumerationInconsistent("need exactly one enumeration per object")
    for e, seq in family.items():
        seq = [G.index(g) for g in seq]
        if sorted(seq) != sorted(G.star(e)) or len(set(seq)) != len(seq):
            raise EnumerationInconsistent(f"enumeration of {G.names[e]} is not G(-, e)")
        if seq[0] != e:
            raise EnumerationInconsistent(f"enumeration of {G.names[e]} must start at the identity")
    fam = {e: [G.index(g) for g in seq] for e, seq in family.items()}
    for g in range(len(G)):
        if g in objs:
            continue
        left, right = fam[int(G.ran[g])], fam[int(G.dom[g])]
        if len(left) != len(right):
            raise EnumerationInconsistent("n_{r(g)} != n_{d(g)}")
        for a, b in zip(left, right):
            x = G.comp[G.inv[a], G.comp[g, b]]
            if int(x) in objs:
                return False
    return True


def violating_enumerations(G, limit=None):
    """Exhaustive search for enumeration families that break the condition."""
    objs = list(G.objects)
    options = []
    for e in objs:
        rest = [g for g in G.star(e) if g != e]
        options.append([(e,) + p for p in permutations(rest)])
    found = []
    for choice in iproduct(*options):
        fam = dict(zip(objs, choice))
        if not check_condition_superfluous(G, fam):
            found.append(fam)
            if limit is not None and len(found) >= limit:
                break
    return found
