"""Integer kernels for the combinatorial inner loops.

Three kernels carry almost all of the enumeration cost:

``closure``
    least subset of morphisms containing a seed mask that is closed under
    the composition table and inversion.
``closed_subsets``
    brute-force filter over every subset of the "free" morphisms, returning
    the bitmasks of those that are closed (the oracle for subgroupoid
    enumeration).
``orbit_labels``
    union-find over ``range(n)`` with an edge list; each element is labelled
    by the smallest member of its class.

Each kernel has a numba ``@njit`` version and a pure-numpy version.  The
numba path is used when numba imports cleanly, unless the environment
variable ``GROUPOID_GALOIS_BACKEND`` is set to ``numpy``.

Composition tables use ``-1`` for undefined products.
"""

import os

import numpy as np

_requested = os.environ.get("GROUPOID_GALOIS_BACKEND", "numba").strip().lower()

try:
    if _requested == "numpy":
        raise ImportError("numba disabled by GROUPOID_GALOIS_BACKEND")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"

# 2**k rows are materialised by the numpy subset filter
MAX_FREE_BITS = 26


# -- numpy -------------------------------------------------------------------

def _np_closure(comp, inv, mask):
    mask = mask.copy()
    while True:
        idx = np.flatnonzero(mask)
        sub = comp[np.ix_(idx, idx)]
        new = mask.copy()
        new[sub[sub >= 0]] = True
        new[inv[idx]] = True
        if np.array_equal(new, mask):
            return mask
        mask = new


def _np_closed_subsets(comp, inv, base, free):
    n = comp.shape[0]
    k = free.shape[0]
    codes = np.arange(1 << k, dtype=np.int64)
    member = np.zeros((codes.shape[0], n), dtype=bool)
    member[:, base] = True
    for bit in range(k):
        member[:, free[bit]] = ((codes >> bit) & 1).astype(bool)
    ok = np.ones(codes.shape[0], dtype=bool)
    for a in range(n):
        ok &= ~member[:, a] | member[:, inv[a]]
        for b in np.flatnonzero(comp[a] >= 0):
            c = comp[a, b]
            ok &= ~(member[:, a] & member[:, b]) | member[:, c]
    weights = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
    return member[ok].astype(np.int64) @ weights


def _np_orbit_labels(n, src, dst):
    labels = np.arange(n, dtype=np.int64)
    if src.shape[0] == 0:
        return labels
    while True:
        lo = np.minimum(labels[src], labels[dst])
        new = labels.copy()
        np.minimum.at(new, src, lo)
        np.minimum.at(new, dst, lo)
        # pointer jumping: label of a label
        new = new[new]
        if np.array_equal(new, labels):
            return labels
        labels = new


# -- numba -------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _nb_closure(comp, inv, mask):
        n = comp.shape[0]
        out = mask.copy()
        members = np.empty(n, dtype=np.int64)
        count = 0
        for i in range(n):
            if out[i]:
                members[count] = i
                count += 1
        # worklist: every new element is composed against all current members
        head = 0
        while head < count:
            x = members[head]
            head += 1
            y = inv[x]
            if not out[y]:
                out[y] = True
                members[count] = y
                count += 1
            j = 0
            while j < count:
                z = members[j]
                c = comp[x, z]
                if c >= 0 and not out[c]:
                    out[c] = True
                    members[count] = c
                    count += 1
                c = comp[z, x]
                if c >= 0 and not out[c]:
                    out[c] = True
                    members[count] = c
                    count += 1
                j += 1
        return out

    @njit(cache=True)
    def _nb_closed_subsets(comp, inv, base, free):
        n = comp.shape[0]
        k = free.shape[0]
        base_bits = np.int64(0)
        for b in base:
            base_bits |= np.int64(1) << b
        found = np.empty(1 << k, dtype=np.int64)
        count = 0
        for code in range(1 << k):
            bits = base_bits
            for t in range(k):
                if (code >> t) & 1:
                    bits |= np.int64(1) << free[t]
            ok = True
            for a in range(n):
                if not ok:
                    break
                if not (bits >> a) & 1:
                    continue
                if not (bits >> inv[a]) & 1:
                    ok = False
                    break
                for b in range(n):
                    if (bits >> b) & 1:
                        c = comp[a, b]
                        if c >= 0 and not (bits >> c) & 1:
                            ok = False
                            break
            if ok:
                found[count] = bits
                count += 1
        return found[:count]

    @njit(cache=True)
    def _nb_find(parent, x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            nxt = parent[x]
            parent[x] = root
            x = nxt
        return root

    @njit(cache=True)
    def _nb_orbit_labels(n, src, dst):
        parent = np.arange(n, dtype=np.int64)
        for t in range(src.shape[0]):
            a = _nb_find(parent, src[t])
            b = _nb_find(parent, dst[t])
            # smaller index wins, so roots are class minima
            if a < b:
                parent[b] = a
            elif b < a:
                parent[a] = b
        labels = np.empty(n, dtype=np.int64)
        for i in range(n):
            labels[i] = _nb_find(parent, i)
        return labels


numpy_impl = {
    "closure": _np_closure,
    "closed_subsets": _np_closed_subsets,
    "orbit_labels": _np_orbit_labels,
}

if HAVE_NUMBA:
    numba_impl = {
        "closure": _nb_closure,
        "closed_subsets": _nb_closed_subsets,
        "orbit_labels": _nb_orbit_labels,
    }
else:
    numba_impl = None

_active = numba_impl if HAVE_NUMBA else numpy_impl


def closure(comp, inv, mask):
    """Closure of a boolean morphism mask under composition and inverses."""
    return _active["closure"](
        np.ascontiguousarray(comp, dtype=np.int64),
        np.ascontiguousarray(inv, dtype=np.int64),
        np.ascontiguousarray(mask, dtype=np.bool_),
    )


def closed_subsets(comp, inv, base, free):
    """Bitmasks of all closed sets ``base | S`` for ``S`` a subset of ``free``."""
    free = np.ascontiguousarray(free, dtype=np.int64)
    if free.shape[0] > MAX_FREE_BITS or comp.shape[0] > 62:
        raise ValueError("too many morphisms for the brute-force subset filter")
    return _active["closed_subsets"](
        np.ascontiguousarray(comp, dtype=np.int64),
        np.ascontiguousarray(inv, dtype=np.int64),
        np.ascontiguousarray(base, dtype=np.int64),
        free,
    )


def orbit_labels(n, src, dst):
    """Class-minimum labels of the equivalence generated by ``src[t] ~ dst[t]``."""
    return _active["orbit_labels"](
        int(n),
        np.ascontiguousarray(src, dtype=np.int64),
        np.ascontiguousarray(dst, dtype=np.int64),
    )
