"""Runners for the three correspondence theorems.

A runner checks the hypotheses (raising a :class:`PreconditionError`
subclass), builds the table, and re-checks every conclusion on the concrete
data.  A failed conclusion raises :class:`TheoremViolation`.
"""

import json
from dataclasses import dataclass, field
from itertools import combinations

from .action import predicates
from .algebra import PartitionSubalgebra, bracket_render, partition_meet_as_intersection
from .constructions import orthogonalize
from .errors import (
    EmptySupport,
    NotGalois,
    NotGlobal,
    NotOrthogonal,
    NotStronglyGalois,
    TheoremViolation,
)
from .galois import invariants, is_alpha_strong, is_galois, separability_witness, stabilizer
from .groupoid import DEFAULT_CAP, Subgroupoid, enumerate_wide_subgroupoids, generated_wide_subgroupoid


@dataclass(frozen=True)
class Row:
    subgroupoid: Subgroupoid
    subalgebra: PartitionSubalgebra
    flags: dict = field(default_factory=dict, compare=False)


@dataclass
class CorrespondenceTable:
    mode: str
    action: object
    rows: list

    def __len__(self):
        return len(self.rows)

    def forward(self):
        return {r.subgroupoid: r.subalgebra for r in self.rows}

    def backward(self):
        return {r.subalgebra: r.subgroupoid for r in self.rows}

    def row_for(self, H):
        for r in self.rows:
            if r.subgroupoid == H:
                return r
        raise KeyError(H)


def _require_nonempty(action):
    empty = action.empty_supports()
    if empty:
        raise EmptySupport(f"A_g = 0 for {action.groupoid.names[empty[0]]}")


def _require_galois(action):
    res = is_galois(action)
    if not res:
        g, k = res.obstruction
        raise NotGalois(f"{action.groupoid.names[g]} fixes index {k + 1}")


def run_orthogonal_correspondence(alpha, cap=DEFAULT_CAP):
    """Wide subgroupoids <-> separable, strong subalgebras, for orthogonal Galois actions."""
    if not predicates(alpha)["orthogonal"]:
        raise NotOrthogonal("the identity ideals overlap")
    _require_nonempty(alpha)
    _require_galois(alpha)
    G = alpha.groupoid
    bottom = invariants(alpha)
    rows = []
    for H in enumerate_wide_subgroupoids(G, cap):
        C = invariants(alpha, H)
        stab = stabilizer(alpha, C)
        flags = {
            "separable": separability_witness(C, bottom).verified,
            "alpha_strong": is_alpha_strong(alpha, C, stab),
            "stabilizer_equals_H": stab.members == H.members,
        }
        if not all(flags.values()):
            raise TheoremViolation(f"row {H.label()} fails {flags}", (H.names, C.to_json(), flags))
        rows.append(Row(H, C, flags))
    _require_injective(rows)
    return CorrespondenceTable("orthogonal", alpha, rows)


def _require_injective(rows):
    seen = {}
    for r in rows:
        other = seen.setdefault(r.subalgebra, r.subgroupoid)
        if other != r.subgroupoid:
            raise TheoremViolation(
                f"{other.label()} and {r.subgroupoid.label()} share {bracket_render(r.subalgebra)}",
                (other.names, r.subgroupoid.names),
            )


@dataclass(frozen=True)
class StrongGaloisReport:
    strongly_galois: bool
    reason: str
    pair: tuple = None  # two wide subgroupoids with equal traces

    def __bool__(self):
        return self.strongly_galois


def _traces(alpha, ortho, subgroupoids):
    """``E^{eps|H} ∩ phi(A)`` for each H, as partitions of E."""
    return [partition_meet_as_intersection(invariants(ortho.action, H), ortho.image) for H in subgroupoids]


def is_strongly_galois(alpha, cap=DEFAULT_CAP):
    G = alpha.groupoid
    for e in G.objects:
        if not alpha.support[e].any():
            return StrongGaloisReport(False, f"A_e = 0 at {G.names[e]}")
    res = is_galois(alpha)
    if not res:
        g, k = res.obstruction
        return StrongGaloisReport(False, f"not Galois: {G.names[g]} fixes index {k + 1}")
    ortho = orthogonalize(alpha)
    W = enumerate_wide_subgroupoids(G, cap)
    traces = _traces(alpha, ortho, W)
    for a, b in combinations(range(len(W)), 2):
        if traces[a] == traces[b]:
            return StrongGaloisReport(
                False, f"equal traces for {W[a].label()} and {W[b].label()}", (W[a], W[b])
            )
    return StrongGaloisReport(True, "strongly Galois")


def run_strong_correspondence(alpha, cap=DEFAULT_CAP):
    """``W <-> 𝖠`` via ``H -> A^{alpha|H}``, inverse ``C -> G_{phi(C)}`` computed in the orthogonalization."""
    _require_nonempty(alpha)
    _require_galois(alpha)
    report = is_strongly_galois(alpha, cap)
    if not report:
        raise NotStronglyGalois(report.reason)
    G = alpha.groupoid
    ortho = orthogonalize(alpha)
    W = enumerate_wide_subgroupoids(G, cap)
    rows = []
    for H, trace in zip(W, _traces(alpha, ortho, W)):
        C = ortho.pullback(trace)
        direct = invariants(alpha, H)
        if C != direct:
            raise TheoremViolation(
                f"phi(A^(alpha|H)) != E^(eps|H) ∩ phi(A) at {H.label()}", (H.names, C.to_json(), direct.to_json())
            )
        stab = stabilizer(ortho.action, ortho.image_of(C))
        flags = {
            "trace_matches_invariants": True,
            "stabilizer_equals_H": stab.members == H.members,
            "stabilizer_is_subgroupoid": stab.is_wide_subgroupoid,
        }
        if not flags["stabilizer_equals_H"]:
            raise TheoremViolation(f"G_phi(C) != H at {H.label()}", (H.names, sorted(stab.members)))
        rows.append(Row(H, C, flags))
    _require_injective(rows)
    return CorrespondenceTable("strong", alpha, rows)


@dataclass
class SimClasses:
    classes: list  # lists of wide subgroupoids with equal invariants
    maxima: list  # H^max per class
    invariants: list  # shared invariant subalgebra per class

    def max_of(self, H):
        for members, top in zip(self.classes, self.maxima):
            if H in members:
                return top
        raise KeyError(H)


def sim_classes(beta, cap=DEFAULT_CAP):
    """Group wide subgroupoids by invariants; each class has a largest member (global actions)."""
    if not predicates(beta)["global"]:
        raise NotGlobal("A_g != A_{r(g)} for some g")
    G = beta.groupoid
    groups = {}
    for H in enumerate_wide_subgroupoids(G, cap):
        groups.setdefault(invariants(beta, H), []).append(H)
    classes, maxima, invs = [], [], []
    for C, members in groups.items():
        join = generated_wide_subgroupoid(G, set().union(*(H.members for H in members)))
        if invariants(beta, join) != C:
            raise TheoremViolation(f"join {join.label()} leaves its class", (join.names,))
        if join not in members or not all(H <= join for H in members):
            raise TheoremViolation(f"class of {join.label()} has no maximum", (join.names,))
        classes.append(members)
        maxima.append(join)
        invs.append(C)
    order = sorted(range(len(classes)), key=lambda k: maxima[k].sort_key)
    return SimClasses([classes[k] for k in order], [maxima[k] for k in order], [invs[k] for k in order])


def run_global_correspondence(beta, cap=DEFAULT_CAP):
    """``W^max <-> 𝖠`` for global Galois actions; inverse ``C -> (G_{phi(C)})^max``."""
    if not predicates(beta)["global"]:
        raise NotGlobal("A_g != A_{r(g)} for some g")
    _require_nonempty(beta)
    _require_galois(beta)
    G = beta.groupoid
    sim = sim_classes(beta, cap)
    ortho = orthogonalize(beta)
    W = enumerate_wide_subgroupoids(G, cap)
    # 𝖠: images phi^{-1}(E^{eps|H} ∩ phi(A)) over all of W, deduplicated
    A_set = {ortho.pullback(t) for t in _traces(beta, ortho, W)}
    rows = []
    for top, C in zip(sim.maxima, sim.invariants):
        stab = stabilizer(ortho.action, ortho.image_of(C))
        base = stab.as_subgroupoid(G) if stab.is_wide_subgroupoid else generated_wide_subgroupoid(G, stab.members)
        back = sim.max_of(base)
        flags = {
            "stabilizer_is_subgroupoid": stab.is_wide_subgroupoid,
            "inverse_equals_H": back == top,
        }
        if back != top:
            raise TheoremViolation(f"(G_phi(C))^max != H at {top.label()}", (top.names, back.names))
        rows.append(Row(top, C, flags))
    _require_injective(rows)
    if {r.subalgebra for r in rows} != A_set:
        raise TheoremViolation("rows do not exhaust the trace set", sorted(bracket_render(c) for c in A_set))
    return CorrespondenceTable("global", beta, rows)


def render_table(table, fmt="text"):
    if fmt == "json":
        doc = {
            "mode": table.mode,
            "m": table.action.m,
            "rows": [
                {
                    "subgroupoid": r.subgroupoid.names,
                    "label": r.subgroupoid.label(),
                    "subalgebra": r.subalgebra.to_json(),
                    "brackets": bracket_render(r.subalgebra),
                    "flags": dict(sorted(r.flags.items())),
                }
                for r in table.rows
            ],
        }
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    lines = []
    for r in table.rows:
        lines.append(f"{r.subgroupoid.label()} ↔ {bracket_render(r.subalgebra) or 'A'}")
    return "\n".join(lines) + "\n"
