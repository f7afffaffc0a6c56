"""Named property checks over random actions, and the ``fuzz`` driver.

A check takes ``(action, rng)`` and returns None when it passes, a short
failure string otherwise, or raises :class:`Skip` when the instance does not
meet its hypotheses.  ``fuzz`` replays everything from integer seeds, so a
reported seed reproduces its failure exactly.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import oracles
from .action import check_equivalence, predicates, prop22_check, restrict
from .algebra import PartitionSubalgebra, all_idempotents, bracket_parse, bracket_render, partition_meet_as_intersection
from .catalog import random_action
from .constructions import Globalization, globalization_isomorphism, globalize, orthogonalize, verify_globalization
from .correspondence import (
    is_strongly_galois,
    run_global_correspondence,
    run_orthogonal_correspondence,
    run_strong_correspondence,
    sim_classes,
)
from .errors import GroupoidGaloisError
from .galois import (
    coordinates_vanishing_off_stabilizer,
    invariants,
    is_alpha_strong,
    is_galois,
    separability_witness,
    stabilizer,
)
from .groupoid import (
    brute_force_wide_subgroupoids,
    canonical_enumeration_family,
    check_condition_superfluous,
    connected_components,
    connected_decomposition,
    enumerate_wide_subgroupoids,
    generated_wide_subgroupoid,
    is_isomorphism,
)


class Skip(Exception):
    """Hypotheses of the check do not hold for this instance."""


CHECKS = {}


def check(name, group):
    def deco(fn):
        CHECKS[name] = (group, fn)
        return fn
    return deco


def _sample(rng, items, k):
    items = list(items)
    if len(items) <= k:
        return items
    return [items[i] for i in sorted(rng.choice(len(items), size=k, replace=False))]


def _nonempty(a):
    return not a.empty_supports()


def _random_partition(rng, A):
    return PartitionSubalgebra.from_labels(A, rng.integers(0, max(1, A.m), size=A.m).tolist())


# -- groupoid --------------------------------------------------------------------

@check("groupoid_inverse", "groupoid")
def _(a, rng):
    G = a.groupoid
    g = np.arange(len(G))
    if not np.array_equal(G.inv[G.inv], g) or not np.array_equal(G.dom[G.inv], G.ran):
        return "inverse is not an involution swapping domain and range"


@check("wide_enumeration_brute_force", "groupoid")
def _(a, rng):
    G = a.groupoid
    if len(G) > 10:
        raise Skip
    fast = enumerate_wide_subgroupoids(G)
    if fast != brute_force_wide_subgroupoids(G):
        return f"{len(fast)} by closure vs {len(brute_force_wide_subgroupoids(G))} by brute force"


@check("generated_idempotent", "groupoid")
def _(a, rng):
    G = a.groupoid
    S = [g for g in range(len(G)) if rng.random() < 0.3]
    H = generated_wide_subgroupoid(G, S)
    if generated_wide_subgroupoid(G, H.members) != H or not set(S) <= H.members:
        return f"closure of {S} is not idempotent"


@check("decomposition_isomorphism", "groupoid")
def _(a, rng):
    for comp in connected_components(a.groupoid):
        sub, _ = comp.as_groupoid()
        D = connected_decomposition(sub)
        if not is_isomorphism(sub, D.product, D.iso):
            return f"decomposition of component {comp.label()} is not an isomorphism"


@check("canonical_enumeration", "groupoid")
def _(a, rng):
    G = a.groupoid
    if not check_condition_superfluous(G, canonical_enumeration_family(G)):
        return "canonical enumeration violates the condition"


# -- algebra -----------------------------------------------------------------------

@check("idempotents_oracle", "algebra")
def _(a, rng):
    A = a.algebra
    S = [i for i in range(A.m) if rng.random() < 0.6]
    got = {x.coeffs for x in all_idempotents(A, S)}
    if got != oracles.idempotents_by_equation(A, S):
        return f"idempotents of {S} disagree with c^2 = c"


@check("meet_oracle", "algebra")
def _(a, rng):
    C1, C2 = _random_partition(rng, a.algebra), _random_partition(rng, a.algebra)
    if not oracles.meet_matches(C1, C2, partition_meet_as_intersection(C1, C2)):
        return f"meet of {bracket_render(C1)} and {bracket_render(C2)}"


@check("bracket_roundtrip", "algebra")
def _(a, rng):
    C = _random_partition(rng, a.algebra)
    if bracket_parse(bracket_render(C), a.algebra) != C:
        return f"round trip of {bracket_render(C)}"


# -- partial actions -------------------------------------------------------------

@check("inverse_domains", "action")
def _(a, rng):
    if not prop22_check(a):
        return "pi_{g^-1} = pi_g^{-1} or pi_g(S_{g^-1} ∩ S_h) = S_g ∩ S_gh fails"


@check("restrict_transitive", "action")
def _(a, rng):
    G = a.groupoid
    W = enumerate_wide_subgroupoids(G)
    for H in _sample(rng, W, 3):
        Ks = [K for K in W if K <= H]
        K = Ks[int(rng.integers(len(Ks)))]
        sub, parent = H.as_groupoid()
        local = {int(p): k for k, p in enumerate(parent)}
        twice = restrict(restrict(a, H), [local[k] for k in K.members])
        if twice.signature() != restrict(a, K).signature():
            return f"restrict via {H.label()} to {K.label()}"


@check("orthogonal_supports", "action")
def _(a, rng):
    if not predicates(a)["orthogonal"]:
        raise Skip
    G = a.groupoid
    cover = np.zeros(a.m, dtype=int)
    for e in G.objects:
        cover += a.support[e]
    if not np.all(cover == 1):
        return "identity supports do not partition the indices"
    for g in range(len(G)):
        if np.any(a.support[g] & ~a.support[G.ran[g]]):
            return f"S_g not inside S_r(g) at {G.names[g]}"


# -- constructions ---------------------------------------------------------------

@check("orthogonalize_equivalent", "constructions")
def _(a, rng):
    o = orthogonalize(a)
    if not predicates(o.action)["orthogonal"] or not check_equivalence(o.embeddings, a, o.action):
        return "orthogonalization is not an orthogonal equivalent action"
    if o.action.m != sum(len(a.S(e)) for e in a.groupoid.objects):
        return "wrong number of minimal idempotents in E"


@check("globalize_contract", "constructions")
def _(a, rng):
    g = globalize(a)
    rep = verify_globalization(a, g.action, g.embeddings)
    if not rep.ok:
        return f"failed clauses {rep.failed()}"


@check("globalize_fixed_point", "constructions")
def _(a, rng):
    if not predicates(a)["global"]:
        raise Skip
    # a globalization is orthogonal, so a non-orthogonal global action
    # globalizes to its orthogonalization rather than to itself
    g = globalize(a)
    if predicates(a)["orthogonal"]:
        target = Globalization(a, a, {e: {i: i for i in a.S(e)} for e in a.groupoid.objects}, ())
    else:
        o = orthogonalize(a)
        target = Globalization(a, o.action, o.embeddings, ())
    if globalization_isomorphism(g, target) is None:
        return "globalization of a global action is not isomorphic to it"


@check("globalize_serves_orthogonalization", "constructions")
def _(a, rng):
    o = orthogonalize(a)
    ga, ge = globalize(a), globalize(o.action)
    objs = a.groupoid.objects
    via_a = {e: {o.embeddings[e][i]: ga.embeddings[e][i] for i in a.S(e)} for e in objs}
    via_e = {e: {i: ge.embeddings[e][o.embeddings[e][i]] for i in a.S(e)} for e in objs}
    bad = verify_globalization(o.action, ga.action, via_a).failed() + verify_globalization(a, ge.action, via_e).failed()
    if bad:
        return f"shared globalization fails {bad}"


@check("globalize_unique", "constructions")
def _(a, rng):
    if len(a.groupoid) > 8 or a.m > 6:
        raise Skip
    g1, g2 = globalize(a), globalize(a, order_seed=int(rng.integers(1 << 30)))
    G = a.groupoid
    counts = [[int(g.action.support[e].sum()) for e in G.objects] for g in (g1, g2)]
    if counts[0] != counts[1] or globalization_isomorphism(g1, g2) is None:
        return "two globalizations are not isomorphic"


# -- Galois engine ---------------------------------------------------------------

@check("invariants_kernel", "galois")
def _(a, rng):
    if a.m > 10:
        raise Skip
    for H in [None] + _sample(rng, enumerate_wide_subgroupoids(a.groupoid), 4):
        if not oracles.invariants_match(a, invariants(a, H), H):
            return f"invariants of {'G' if H is None else H.label()} differ from the linear kernel"


@check("galois_gram", "galois")
def _(a, rng):
    if bool(is_galois(a)) != (oracles.gram_system(a) is not None):
        return "Galois criterion disagrees with the Gram system"


def separable_and_strong(a):
    A = PartitionSubalgebra.discrete(a.algebra)
    return separability_witness(A, invariants(a)).verified and is_alpha_strong(a, A)


def trivially_acting(a):
    """Non-identities with ``A_g != 0`` that fix all of A; strength says nothing about them."""
    objs = set(a.groupoid.objects)
    stab = stabilizer(a, PartitionSubalgebra.discrete(a.algebra)).members
    return sorted(g for g in stab if g not in objs and a.support[g].any())


@check("galois_implies_separable_strong", "galois")
def _(a, rng):
    if is_galois(a) and not separable_and_strong(a):
        return "Galois but A is not separable and strong"


@check("galois_iff_separable_strong_faithful", "galois")
def _(a, rng):
    rhs = separable_and_strong(a) and not trivially_acting(a)
    if bool(is_galois(a)) != rhs:
        return f"is_galois={bool(is_galois(a))} but separable, strong and G_A = G0 on A_g != 0 is {rhs}"


@check("invariants_monotone", "galois")
def _(a, rng):
    W = enumerate_wide_subgroupoids(a.groupoid)
    for H in _sample(rng, W, 4):
        CH = invariants(a, H)
        for K in W:
            if H <= K and not invariants(a, K).is_subalgebra_of(CH):
                return f"{K.label()} contains {H.label()} but its invariants are not coarser"


@check("stabilizer_contains_H", "galois")
def _(a, rng):
    for H in _sample(rng, enumerate_wide_subgroupoids(a.groupoid), 6):
        C = invariants(a, H)
        st = stabilizer(a, C).members
        if not H.members <= st:
            return f"stabilizer of the invariants of {H.label()} misses part of it"
        if st != oracles.stabilizer_by_elements(a, C):
            return f"stabilizer shortcut disagrees with element check at {H.label()}"


@check("alpha_strong_oracle", "galois")
def _(a, rng):
    if a.m > 8:
        raise Skip
    Cs = [PartitionSubalgebra.discrete(a.algebra), PartitionSubalgebra.trivial(a.algebra), _random_partition(rng, a.algebra)]
    Cs += [invariants(a, H) for H in _sample(rng, enumerate_wide_subgroupoids(a.groupoid), 2)]
    for C in Cs:
        if is_alpha_strong(a, C) != oracles.alpha_strong_exhaustive(a, C):
            return f"strength of {bracket_render(C) or 'A'} disagrees with the exhaustive oracle"


@check("coordinates_off_stabilizer", "galois")
def _(a, rng):
    if not is_galois(a):
        raise Skip
    for H in _sample(rng, enumerate_wide_subgroupoids(a.groupoid), 4):
        C = invariants(a, H)
        if is_alpha_strong(a, C):
            coordinates_vanishing_off_stabilizer(a, C)


# -- theorems ----------------------------------------------------------------------

@check("orthogonalization_keeps_galois", "theorems")
def _(a, rng):
    if not is_galois(a):
        raise Skip
    if not is_galois(orthogonalize(a).action):
        return "Galois action with non-Galois orthogonalization"


@check("globalization_keeps_galois", "theorems")
def _(a, rng):
    if not is_galois(a):
        raise Skip
    if not is_galois(globalize(a).action):
        return "Galois action with non-Galois globalization"


@check("orthogonal_galois_iff_globalization", "theorems")
def _(a, rng):
    if not predicates(a)["orthogonal"]:
        raise Skip
    if bool(is_galois(a)) != bool(is_galois(globalize(a).action)):
        return "orthogonal action and its globalization differ on Galois"


@check("trace_of_invariants", "theorems")
def _(a, rng):
    o = orthogonalize(a)
    for H in enumerate_wide_subgroupoids(a.groupoid):
        lhs = o.image_of(invariants(a, H))
        rhs = partition_meet_as_intersection(invariants(o.action, H), o.image)
        if lhs != rhs:
            return f"phi(A^H) != E^H ∩ phi(A) at {H.label()}"


@check("orthogonal_roundtrip", "theorems")
def _(a, rng):
    if not (predicates(a)["orthogonal"] and _nonempty(a) and is_galois(a)):
        raise Skip
    t = run_orthogonal_correspondence(a)
    for r in t.rows:
        if stabilizer(a, r.subalgebra).members != r.subgroupoid.members:
            return f"round trip fails at {r.subgroupoid.label()}"
    if len(set(t.backward())) != len(t.rows):
        return "two subgroupoids share invariants"


@check("strong_roundtrip", "theorems")
def _(a, rng):
    if not is_strongly_galois(a):
        raise Skip
    t = run_strong_correspondence(a)
    o = orthogonalize(a)
    for r in t.rows:
        if stabilizer(o.action, o.image_of(r.subalgebra)).members != r.subgroupoid.members:
            return f"round trip fails at {r.subgroupoid.label()}"


@check("global_roundtrip", "theorems")
def _(a, rng):
    if not (predicates(a)["global"] and _nonempty(a) and is_galois(a)):
        raise Skip
    t = run_global_correspondence(a)
    sim = sim_classes(a)
    for H in enumerate_wide_subgroupoids(a.groupoid):
        if invariants(a, H) != invariants(a, sim.max_of(H)):
            return f"invariants of {H.label()} and its maximum differ"
    if [r.subgroupoid for r in t.rows] != sim.maxima:
        return "rows are not the class maxima"


@check("join_keeps_invariants", "theorems")
def _(a, rng):
    if not predicates(a)["global"]:
        raise Skip
    G = a.groupoid
    W = enumerate_wide_subgroupoids(G)
    by_inv = {}
    for H in W:
        by_inv.setdefault(invariants(a, H), []).append(H)
    for C, members in by_inv.items():
        for H1, H2 in combinations(_sample(rng, members, 5), 2):
            if invariants(a, generated_wide_subgroupoid(G, H1.members | H2.members)) != C:
                return f"join of {H1.label()} and {H2.label()} changes the invariants"


# -- driver ------------------------------------------------------------------------

@dataclass
class FuzzConfig:
    instances: int = 200
    seed: int = 0
    max_m: int = 8
    max_morphisms: int = 16
    checks: tuple = None  # names; None = all
    orthogonal: bool = None
    global_: bool = None
    free: bool = None
    base: object = None


@dataclass
class FuzzReport:
    config: dict
    stats: dict = field(default_factory=dict)  # check -> {"ran", "skipped", "failed"}
    failures: list = field(default_factory=list)  # {"seed", "check", "detail"}

    @property
    def ok(self):
        return not self.failures

    def as_dict(self):
        return {"config": self.config, "stats": self.stats, "failures": self.failures}


def instance(seed, cfg):
    kw = {} if cfg.base is None else {"base": cfg.base}
    return random_action(seed, cfg.max_m, cfg.max_morphisms, orthogonal=cfg.orthogonal,
                         global_=cfg.global_, free=cfg.free, **kw)


def run_check(name, action, seed):
    """``("ran" | "skipped" | "failed", detail)`` for one check on one instance."""
    _, fn = CHECKS[name]
    rng = np.random.default_rng([seed, sum(map(ord, name))])
    try:
        detail = fn(action, rng)
    except Skip:
        return "skipped", None
    except (GroupoidGaloisError, AssertionError) as exc:
        return "failed", f"{type(exc).__name__}: {exc}"
    return ("failed", detail) if detail else ("ran", None)


def fuzz(config=None):
    cfg = config or FuzzConfig()
    names = list(CHECKS) if cfg.checks is None else list(cfg.checks)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks {unknown}")
    cdict = {k: (str(v) if k == "base" and v is not None else v) for k, v in cfg.__dict__.items()}
    cdict["checks"] = names
    report = FuzzReport(cdict, {n: {"ran": 0, "skipped": 0, "failed": 0} for n in names})
    for k in range(cfg.instances):
        seed = cfg.seed + k
        a = instance(seed, cfg)
        for n in names:
            status, detail = run_check(n, a, seed)
            report.stats[n][status] += 1
            if status == "failed":
                report.stats[n]["ran"] += 1
                report.failures.append({"seed": seed, "check": n, "detail": detail})
    return report
