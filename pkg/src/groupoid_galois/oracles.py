"""Independent slow checks used by the test suite and by ``fuzz``.

Production code never calls into this module.  Linear algebra goes through
sympy's ``DomainMatrix`` over QQ or GF(p); nothing here reuses the
union-find or index shortcuts of the fast paths.
"""

from fractions import Fraction
from itertools import product as iproduct

from sympy import GF, Poly, Symbol, roots
from sympy import QQ as SYMPY_QQ
from sympy.polys.matrices import DomainMatrix

from .algebra import all_idempotents
from .galois import GaloisCoordinates, fixes, verify_coordinates


def _domain(base):
    return SYMPY_QQ if base.p is None else GF(base.p)


def _from_domain(x, base):
    if base.p is None:
        return Fraction(int(x.numerator), int(x.denominator))
    return int(GF(base.p).to_int(x)) % base.p


def _matrix(rows, ncols, base):
    K = _domain(base)
    rows = [[K.convert(int(v) if base.p is not None else Fraction(v)) for v in r] for r in rows]
    if not rows:
        return DomainMatrix.zeros((0, ncols), K)
    return DomainMatrix(rows, (len(rows), ncols), K)


def rank(rows, ncols, base):
    return _matrix(rows, ncols, base).rank() if rows else 0


def nullspace(rows, ncols, base):
    """Basis of ``{x : M x = 0}`` as tuples of base-ring values."""
    if not rows:
        return [tuple(base.coerce(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    ns = _matrix(rows, ncols, base).nullspace().to_list()
    return [tuple(_from_domain(x, base) for x in r) for r in ns]


def same_span(U, V, ncols, base):
    r = rank(list(U) + list(V), ncols, base)
    return rank(list(U), ncols, base) == r == rank(list(V), ncols, base)


def solve(rows, rhs, ncols, base):
    """A solution of ``M x = rhs`` or None."""
    if not rows:
        return [base.zero] * ncols
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = _matrix(aug, ncols + 1, base).rref()
    if ncols in pivots:
        return None
    R = R.to_list()
    x = [base.zero] * ncols
    for r, c in enumerate(pivots):
        x[c] = _from_domain(R[r][ncols], base)
    return x


def span_basis(C):
    return [f.coeffs for f in C.block_idempotents()]


# -- Galois coordinates ---------------------------------------------------------

def gram_system(action):
    """Solve for ``U`` with ``U[pi_g(k), k] = delta(g is an identity)`` over all ``k`` in ``S_{g^-1}``.

    With ``x_i = e_i`` and ``y_i`` the i-th row of ``U`` any matrix is realised,
    so the coordinate identities are solvable iff this system is.  Returns the
    verified coordinate system or None.
    """
    G = action.groupoid
    m = action.m
    base = action.algebra.base
    objs = set(G.objects)
    rows, rhs = [], []
    for g in range(len(G)):
        for k, j in action.pi(g).items():
            r = [0] * (m * m)
            r[j * m + k] = 1
            rows.append(r)
            rhs.append(1 if g in objs else 0)
    U = solve(rows, rhs, m * m, base)
    if U is None:
        return None
    A = action.algebra
    coords = GaloisCoordinates(tuple((A.e(i), A.element(U[i * m:(i + 1) * m])) for i in range(m)))
    if not verify_coordinates(action, coords):
        raise AssertionError("Gram solution does not satisfy the coordinate identities")
    return coords


# -- invariants and intersections --------------------------------------------------

def invariant_basis(action, H=None):
    """Kernel of ``a -> alpha_h(a 1_{h^-1}) - a 1_h`` over ``h`` in H, via exact linear algebra."""
    G = action.groupoid
    m = action.m
    members = range(len(G)) if H is None else sorted(H.members)
    rows = []
    for h in members:
        for k, j in action.pi(h).items():
            # coordinate j: c_k - c_j
            if k != j:
                r = [0] * m
                r[k] += 1
                r[j] -= 1
                rows.append(r)
    return nullspace(rows, m, action.algebra.base)


def invariants_match(action, C, H=None):
    return same_span(invariant_basis(action, H), span_basis(C), action.m, action.algebra.base)


def span_intersection(C1, C2):
    """Basis of ``span(C1) ∩ span(C2)``."""
    base = C1.algebra.base
    m = C1.algebra.m
    V1, V2 = span_basis(C1), span_basis(C2)
    n1 = len(V1)
    # columns: coefficients of V1 then of V2; equations sum a_i V1_i - sum b_j V2_j = 0
    rows = [[V1[i][t] for i in range(n1)] + [-V2[j][t] for j in range(len(V2))] for t in range(m)]
    out = []
    for sol in nullspace(rows, n1 + len(V2), base):
        out.append(tuple(base.coerce(sum(sol[i] * V1[i][t] for i in range(n1))) for t in range(m)))
    return out


def meet_matches(C1, C2, meet):
    return same_span(span_intersection(C1, C2), span_basis(meet), C1.algebra.m, C1.algebra.base)


# -- stabilizer and strength ---------------------------------------------------

def stabilizer_by_elements(action, C):
    """``G_C`` by applying each ``alpha_g`` to the block idempotents (R-linearity covers the rest)."""
    return frozenset(g for g in range(len(action.groupoid)) if all(fixes(action, g, f) for f in C.block_idempotents()))


def strength_failures_exhaustive(action, C, cap=20):
    """Triples ``(g, h, e)`` with no block idempotent separating ``alpha_g``, ``alpha_h`` on ``e``.

    ``e`` ranges over every nonzero idempotent supported in ``S_g ∪ S_h``.
    Separation by some element of C reduces to separation by a block
    idempotent because ``a -> (alpha_g(a 1) - alpha_h(a 1)) e`` is linear.
    """
    G = action.groupoid
    stab = stabilizer_by_elements(action, C)
    gens = C.block_idempotents()
    images = [[action.apply(g, f) for f in gens] for g in range(len(G))]
    bad = []
    for g, h in iproduct(range(len(G)), repeat=2):
        if G.ran[g] != G.ran[h] or int(G.comp[G.inv[g], h]) in stab:
            continue
        diffs = [images[g][b] - images[h][b] for b in range(len(gens))]
        span = action.S(g) | action.S(h)
        for e in all_idempotents(action.algebra, span, cap):
            if not e.is_zero() and all((d * e).is_zero() for d in diffs):
                bad.append((g, h, e))
    return bad


def alpha_strong_exhaustive(action, C, cap=20):
    return not strength_failures_exhaustive(action, C, cap)


# -- idempotents ------------------------------------------------------------------

def idempotent_scalars(base):
    """Roots of ``c^2 - c`` in the base ring."""
    if base.p is None:
        x = Symbol("c")
        return sorted(Fraction(int(r.p), int(r.q)) for r in roots(Poly(x**2 - x, x, domain=SYMPY_QQ)))
    return [c for c in range(base.p) if (c * c - c) % base.p == 0]


def idempotents_by_equation(A, support):
    """Coefficient tuples solving ``c_i^2 = c_i`` on ``support`` and vanishing elsewhere."""
    base = A.base
    support = sorted(set(support))
    out = set()
    for values in iproduct(idempotent_scalars(base), repeat=len(support)):
        c = [base.zero] * A.m
        for i, v in zip(support, values):
            c[i] = base.coerce(v)
        out.add(tuple(c))
    return out
