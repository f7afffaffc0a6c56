"""The commutative ring ``A = R e_1 + ... + R e_m`` and its partition subalgebras.

Indices are 0-based in code and 1-based in every rendered or serialized form.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import AlgebraMismatch, OverlappingBlocks, ParseError, SupportTooLarge

IDEMPOTENT_CAP = 20


def _is_prime(p):
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class BaseRing:
    """Exact base ring: the rationals (``p is None``) or the prime field F_p."""

    p: int = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def parse(cls, text):
        text = str(text).strip()
        if text in ("Q", "QQ"):
            return cls()
        m = re.fullmatch(r"(?:Fp|F|GF):?(\d+)", text)
        if not m:
            raise ParseError(f"unknown base ring {text!r}")
        return cls(int(m.group(1)))

    def __str__(self):
        return "Q" if self.p is None else f"Fp:{self.p}"

    @property
    def characteristic(self):
        return 0 if self.p is None else self.p

    def coerce(self, x):
        if self.p is None:
            return x if type(x) is Fraction else Fraction(x)
        if type(x) is int:
            return x % self.p
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def parse_element(self, text):
        try:
            return self.coerce(Fraction(str(text)))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad coefficient {text!r}") from exc

    def render(self, x):
        return str(x) if self.p is None else int(x)

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)


QQ = BaseRing()


@dataclass(frozen=True)
class IdempotentAlgebra:
    """``m`` pairwise orthogonal idempotents summing to 1 over ``base``."""

    m: int
    base: BaseRing = QQ

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need m >= 1")

    def element(self, coeffs):
        coeffs = tuple(self.base.coerce(c) for c in coeffs)
        if len(coeffs) != self.m:
            raise AlgebraMismatch(f"expected {self.m} coefficients, got {len(coeffs)}")
        return RingElement(self, coeffs)

    def e(self, i):
        return self.indicator([i])

    def indicator(self, indices):
        idx = set(indices)
        return RingElement(self, tuple(self.base.one if i in idx else self.base.zero for i in range(self.m)))

    @property
    def zero(self):
        return self.indicator(())

    @property
    def one(self):
        return self.indicator(range(self.m))

    def basis(self):
        return [self.e(i) for i in range(self.m)]


@dataclass(frozen=True)
class RingElement:
    algebra: IdempotentAlgebra
    coeffs: tuple

    def _check(self, other):
        if not isinstance(other, RingElement) or other.algebra != self.algebra:
            raise AlgebraMismatch("elements live in different algebras")

    def __add__(self, other):
        self._check(other)
        c = self.algebra.base.coerce
        return RingElement(self.algebra, tuple(c(a + b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        c = self.algebra.base.coerce
        return RingElement(self.algebra, tuple(c(-a) for a in self.coeffs))

    def __mul__(self, other):
        c = self.algebra.base.coerce
        if isinstance(other, RingElement):
            self._check(other)
            return RingElement(self.algebra, tuple(c(a * b) for a, b in zip(self.coeffs, other.coeffs)))
        s = c(other)
        return RingElement(self.algebra, tuple(c(s * a) for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self):
        return all(a == 0 for a in self.coeffs)

    def is_idempotent(self):
        return self * self == self

    def support(self):
        return frozenset(i for i, a in enumerate(self.coeffs) if a != 0)

    def to_json(self):
        return [self.algebra.base.render(a) for a in self.coeffs]

    def __repr__(self):
        terms = [f"{a}*e{i + 1}" for i, a in enumerate(self.coeffs) if a != 0]
        return " + ".join(terms) if terms else "0"


def ring_sum(elements, algebra):
    total = algebra.zero
    for x in elements:
        total = total + x
    return total


def all_idempotents(A, support, cap=IDEMPOTENT_CAP):
    """Every idempotent supported inside ``support``: the 0/1 vectors, 0 included."""
    support = sorted(set(support))
    if len(support) > cap:
        raise SupportTooLarge(f"{len(support)} indices > cap {cap}")
    out = []
    for code in range(1 << len(support)):
        out.append(A.indicator([i for t, i in enumerate(support) if (code >> t) & 1]))
    return out


def _canonical(blocks):
    return tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))


@dataclass(frozen=True)
class PartitionSubalgebra:
    """Span of the block idempotents ``f_b = sum_{i in b} e_i``."""

    algebra: IdempotentAlgebra
    blocks: tuple

    def __post_init__(self):
        blocks = _canonical(self.blocks)
        flat = [i for b in blocks for i in b]
        if any(len(b) == 0 for b in blocks):
            raise ValueError("empty block")
        if len(flat) != len(set(flat)):
            raise OverlappingBlocks("blocks overlap")
        if sorted(flat) != list(range(self.algebra.m)):
            raise ValueError("blocks must cover 0..m-1")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def discrete(cls, A):
        """All singletons: the whole algebra."""
        return cls(A, tuple((i,) for i in range(A.m)))

    @classmethod
    def trivial(cls, A):
        """One block: the copy of R spanned by 1."""
        return cls(A, (tuple(range(A.m)),))

    @classmethod
    def from_labels(cls, A, labels):
        groups = {}
        for i, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(i)
        return cls(A, tuple(groups.values()))

    @cached_property
    def labels(self):
        """Block number of each index (blocks ordered by least element)."""
        lab = np.empty(self.algebra.m, dtype=np.int64)
        for k, b in enumerate(self.blocks):
            lab[list(b)] = k
        return lab

    def block_of(self, i):
        return int(self.labels[i])

    def block_idempotents(self):
        return [self.algebra.indicator(b) for b in self.blocks]

    def contains(self, a):
        if a.algebra != self.algebra:
            raise AlgebraMismatch("element from another algebra")
        return all(len({a.coeffs[i] for i in b}) == 1 for b in self.blocks)

    def is_subalgebra_of(self, other):
        """``self <= other`` as subalgebras, i.e. every block of self is a union of blocks of other."""
        if other.algebra != self.algebra:
            raise AlgebraMismatch("different algebras")
        return all(self.block_of(i) == self.block_of(b[0]) for b in other.blocks for i in b)

    def __len__(self):
        return len(self.blocks)

    def to_json(self):
        return [[i + 1 for i in b] for b in self.blocks]

    def __str__(self):
        return bracket_render(self)


def partition_meet_as_intersection(C1, C2):
    """``C1 ∩ C2``: blocks are the classes of the join of both block relations."""
    if C1.algebra != C2.algebra:
        raise AlgebraMismatch("different algebras")
    m = C1.algebra.m
    idx = np.arange(m)
    reps1 = np.array([b[0] for b in C1.blocks])[C1.labels]
    reps2 = np.array([b[0] for b in C2.blocks])[C2.labels]
    labels = _kernels.orbit_labels(m, np.concatenate([idx, idx]), np.concatenate([reps1, reps2]))
    return PartitionSubalgebra.from_labels(C1.algebra, labels)


def bracket_render(C):
    """Bracket notation: non-singleton blocks only, ordered by least index."""
    return "".join("[" + ",".join(str(i + 1) for i in b) + "]" for b in C.blocks if len(b) > 1)


_BLOCK = re.compile(r"\[([^\[\]]*)\]")


def bracket_parse(text, A):
    text = text.strip()
    if text in ("", "A"):
        return PartitionSubalgebra.discrete(A)
    pos = 0
    blocks = []
    for mt in _BLOCK.finditer(text):
        if text[pos : mt.start()].strip():
            raise ParseError(f"unexpected text {text[pos:mt.start()]!r}")
        pos = mt.end()
        blocks.append(_parse_block(mt.group(1), A.m))
    if text[pos:].strip():
        raise ParseError(f"unexpected text {text[pos:]!r}")
    seen = set()
    for b in blocks:
        if seen & set(b):
            raise OverlappingBlocks(f"index {sorted(seen & set(b))[0] + 1} appears twice")
        seen |= set(b)
    blocks += [(i,) for i in range(A.m) if i not in seen]
    return PartitionSubalgebra(A, tuple(blocks))


def _parse_block(body, m):
    items = [t.strip() for t in body.split(",")]
    out = []
    k = 0
    while k < len(items):
        tok = items[k]
        if tok in ("…", "...", ".."):
            # range: previous, …, next
            if not out or k + 1 >= len(items):
                raise ParseError("dangling ellipsis")
            hi = _parse_index(items[k + 1], m)
            out.extend(range(out[-1] + 1, hi + 1))
            k += 2
            continue
        out.append(_parse_index(tok, m))
        k += 1
    if len(set(out)) != len(out):
        raise OverlappingBlocks("repeated index inside a block")
    if not out:
        raise ParseError("empty block")
    return tuple(out)


def _parse_index(tok, m):
    if not tok.isdigit():
        raise ParseError(f"bad index {tok!r}")
    i = int(tok)
    if not 1 <= i <= m:
        raise ParseError(f"index {i} out of range 1..{m}")
    return i - 1
