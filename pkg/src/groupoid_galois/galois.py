"""Invariants, Galois coordinates, stabilizers, strength and separability.

Everything here works on block idempotents and index permutations; the
element-level definitions are kept alongside (``verify_coordinates``,
``fixes``) so the shortcuts can be checked against them.

Two reductions are used throughout.

*Galois criterion.*  Writing ``U[a, b] = sum_i x_i[a] y_i[b]``, the coordinate
identity at ``g`` reads ``U[pi_g(k), k] = 1`` (``g`` an identity) or ``0``
(otherwise) for ``k`` in ``S_{g^-1}``.  Since ``U`` can be any matrix, the
system is solvable iff no non-identity ``g`` has a fixed index, and then
``x_i = y_i = e_i`` works.

*Strength.*  For a block idempotent ``f_b`` the coordinate ``j`` of
``alpha_g(f_b 1_{g^-1})`` is 1 iff ``j`` is in ``S_g`` and ``pi_g^{-1}(j)`` is in
``b``.  So ``alpha_g`` and ``alpha_h`` are separated at ``j`` by some ``a`` in
``C`` iff the blocks of ``pi_g^{-1}(j)`` and ``pi_h^{-1}(j)`` differ (a missing
preimage counts as its own block).  A nonzero idempotent ``e`` is separated
iff some index of its support is, so the condition over all idempotents of
``A_g ∪ A_h`` is the same as the condition on every single index of
``S_g ∪ S_h``.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .algebra import PartitionSubalgebra, ring_sum
from .errors import NotCoarsening, VerificationFailed
from .groupoid import Subgroupoid, is_closed


def _members(action, H):
    if H is None:
        return range(len(action.groupoid))
    if isinstance(H, Subgroupoid):
        return sorted(H.members)
    return sorted(action.groupoid.index(h) for h in H)


def invariants(action, H=None):
    """``A^{alpha|H}``: classes of ``i ~ pi_h(i)`` over ``h`` in ``H`` (default all of G)."""
    src, dst = [], []
    for h in _members(action, H):
        row = action.perm[h]
        idx = np.flatnonzero(row >= 0)
        src.append(idx)
        dst.append(row[idx])
    src = np.concatenate(src) if src else np.zeros(0, dtype=np.int64)
    dst = np.concatenate(dst) if dst else np.zeros(0, dtype=np.int64)
    labels = _kernels.orbit_labels(action.m, src, dst)
    return PartitionSubalgebra.from_labels(action.algebra, labels)


@dataclass(frozen=True)
class GaloisCoordinates:
    pairs: tuple  # ((x_1, y_1), ...)

    @classmethod
    def diagonal(cls, elements):
        return cls(tuple((x, x) for x in elements))

    def __len__(self):
        return len(self.pairs)


def coordinate_sum(action, coords, g):
    """``sum_i x_i alpha_g(y_i 1_{g^-1})``."""
    A = action.algebra
    return ring_sum((x * action.apply(g, y) for x, y in coords.pairs), A)


def verify_coordinates(action, coords):
    """Exact check of the coordinate identity at every morphism."""
    G = action.groupoid
    objs = set(G.objects)
    for g in range(len(G)):
        target = action.unit(g) if g in objs else action.algebra.zero
        if coordinate_sum(action, coords, g) != target:
            return False
    return True


@dataclass(frozen=True)
class GaloisResult:
    galois: bool
    witness: GaloisCoordinates = None
    obstruction: tuple = None  # (g, k): non-identity g fixing index k

    def __bool__(self):
        return self.galois


def galois_obstruction(action):
    G = action.groupoid
    objs = set(G.objects)
    for g in range(len(G)):
        if g in objs:
            continue
        row = action.perm[g]
        fixed = np.flatnonzero(row == np.arange(action.m))
        if fixed.size:
            return g, int(fixed[0])
    return None


def is_galois(action):
    obs = galois_obstruction(action)
    if obs is not None:
        return GaloisResult(False, obstruction=obs)
    coords = GaloisCoordinates.diagonal(action.algebra.basis())
    if not verify_coordinates(action, coords):
        raise VerificationFailed("diagonal coordinates rejected although no index is fixed")
    return GaloisResult(True, witness=coords)


@dataclass(frozen=True)
class StabilizerSet:
    members: frozenset
    is_wide_subgroupoid: bool

    def as_subgroupoid(self, G):
        return Subgroupoid(G, self.members)


def fixes(action, g, a):
    """``alpha_g(a 1_{g^-1}) == a 1_g``."""
    return action.apply(g, a) == a * action.unit(g)


def stabilizer(action, C):
    """``G_C``: morphisms fixing every block idempotent of ``C`` in the partial sense."""
    G = action.groupoid
    lab = C.labels
    members = set()
    for g in range(len(G)):
        row = action.perm[g]
        idx = np.flatnonzero(row >= 0)
        if np.array_equal(lab[idx], lab[row[idx]]):
            members.add(g)
    members = frozenset(members)
    return StabilizerSet(members, set(G.objects) <= members and is_closed(G, members))


def _pullback_blocks(action, g, lab):
    """Per index j: block of pi_g^{-1}(j), or -1 when j is outside S_g."""
    out = -np.ones(action.m, dtype=np.int64)
    row = action.perm[g]
    idx = np.flatnonzero(row >= 0)
    out[row[idx]] = lab[idx]
    return out


def strength_failures(action, C, stab=None):
    """Pairs ``(g, h, j)`` where no element of ``C`` separates ``alpha_g``, ``alpha_h`` at index ``j``."""
    G = action.groupoid
    stab = stabilizer(action, C) if stab is None else stab
    lab = C.labels
    pulled = [_pullback_blocks(action, g, lab) for g in range(len(G))]
    bad = []
    for g in range(len(G)):
        for h in range(len(G)):
            if G.ran[g] != G.ran[h]:
                continue
            if int(G.comp[G.inv[g], h]) in stab.members:
                continue
            span = action.support[g] | action.support[h]
            same = span & (pulled[g] == pulled[h])
            for j in np.flatnonzero(same):
                bad.append((g, h, int(j)))
    return bad


def is_alpha_strong(action, C, stab=None):
    return not strength_failures(action, C, stab)


@dataclass(frozen=True)
class SeparabilityWitness:
    """``e = sum_b f_b ⊗ f_b`` as the matrix of coefficients of ``e_i ⊗ e_j``."""

    tensor: tuple  # m x m, rows of base-ring values
    pairs: tuple  # block idempotents f_b
    verified: bool


def separability_witness(C, D):
    """Separability idempotent of ``C`` over a subalgebra ``D`` it contains.

    The identities ``mu(e) = 1``, ``e^2 = e`` and ``(x⊗1 - 1⊗x) e = 0`` are checked
    in the free tensor square ``A ⊗_R A`` (coefficient matrices); they then
    hold in the quotient ``C ⊗_D C`` too.
    """
    if not D.is_subalgebra_of(C):
        raise NotCoarsening("D is not a subalgebra of C")
    A = C.algebra
    R = A.base
    m = A.m
    T = [[R.zero] * m for _ in range(m)]
    for b in C.blocks:
        for i in b:
            for j in b:
                T[i][j] = R.coerce(T[i][j] + 1)
    ok = all(T[i][i] == R.one for i in range(m))  # mu(e) = sum_b f_b = 1
    # e_i⊗e_j · e_k⊗e_l = δ_ik δ_jl e_i⊗e_j, so the product is entrywise
    ok = ok and all(R.coerce(T[i][j] * T[i][j]) == T[i][j] for i in range(m) for j in range(m))
    for f in C.block_idempotents():
        x = f.coeffs
        for i in range(m):
            for j in range(m):
                if R.coerce(x[i] * T[i][j] - T[i][j] * x[j]) != 0:
                    ok = False
    return SeparabilityWitness(tuple(map(tuple, T)), tuple(C.block_idempotents()), ok)


def coordinates_vanishing_off_stabilizer(action, C):
    """``x_b = y_b = f_b``: sums to 1 and ``sum x_b alpha_g(y_b 1_{g^-1}) = 0`` off ``G_C``."""
    A = action.algebra
    coords = GaloisCoordinates.diagonal(C.block_idempotents())
    if ring_sum((x * y for x, y in coords.pairs), A) != A.one:
        raise VerificationFailed("block idempotents do not sum to 1")
    stab = stabilizer(action, C).members
    for g in range(len(action.groupoid)):
        if g not in stab and not coordinate_sum(action, coords, g).is_zero():
            raise VerificationFailed(f"sum does not vanish at {action.groupoid.names[g]}")
    return coords
