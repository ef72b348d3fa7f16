"""Sparse arithmetic over F_p for monomials, terms and free-module vectors.

Representation conventions shared by the whole package:

* A monomial is a tuple ``(deg, e1, ..., en)``: the exponent vector prefixed
  with its cached total degree.
* A module monomial is a pair ``(mono, comp)`` with a 0-based component index
  into the ambient free module.
* A vector (element of a free module) is a dict mapping module monomials to
  nonzero coefficients in ``[1, p)``.  Dict insertion order is meaningful: a
  vector is "normalized" when its keys are strictly decreasing under the
  active ordering, in which case the first stored term is the leading term.
* A plain polynomial (element of R) is a dict mapping monomials to nonzero
  coefficients.

All value types are immutable or treated as such after construction;
:class:`OpCounters` is the only mutable shared state.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

Mono = tuple  # (deg, e1, ..., en)
ModMono = tuple  # (Mono, component)
Vec = dict  # ModMono -> coefficient
Poly = dict  # Mono -> coefficient

MAX_EXPONENT = 1 << 15


class DomainError(ValueError):
    """A mathematically invalid request (bad field, non-graded input, ...)."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Ring:
    """The polynomial ring F_p[names] with a prime characteristic p < 2^31."""

    p: int
    names: tuple

    def __post_init__(self):
        if not is_prime(self.p) or self.p >= 1 << 31:
            raise DomainError(f"characteristic must be a prime < 2^31, got {self.p}")
        if not self.names or len(set(self.names)) != len(self.names):
            raise DomainError("variable names must be nonempty and distinct")
        object.__setattr__(self, "names", tuple(self.names))

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def one(self) -> Mono:
        return (0,) * (len(self.names) + 1)

    def mono(self, exps: Iterable[int]) -> Mono:
        """Pack an exponent vector into the internal monomial representation."""
        exps = tuple(exps)
        if len(exps) != len(self.names):
            raise DomainError(f"expected {len(self.names)} exponents, got {len(exps)}")
        for e in exps:
            if e < 0 or e > MAX_EXPONENT:
                raise DomainError(f"exponent {e} out of range [0, {MAX_EXPONENT}]")
        return (sum(exps),) + exps

    def var(self, i: int) -> Mono:
        exps = [0] * self.nvars
        exps[i] = 1
        return self.mono(exps)

    def normalize(self, c: int) -> int:
        return c % self.p

    def inv(self, c: int) -> int:
        c %= self.p
        if c == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(c, self.p - 2, self.p)


class OpCounters:
    """Counters for ground-field operations and monomial comparisons.

    ``n_canc <= n_add`` always holds: a cancellation is an addition whose
    result is zero.  ``n_terms`` is filled in once per resolution (terms of
    all differentials except the first).  Instances are not thread-safe;
    parallel code keeps one instance per worker and merges at the end, which
    satisfies the no-lost-updates contract.
    """

    __slots__ = ("n_terms", "n_mult", "n_add", "n_canc", "n_monomial_cmp")

    def __init__(self):
        self.n_terms = 0
        self.n_mult = 0
        self.n_add = 0
        self.n_canc = 0
        self.n_monomial_cmp = 0

    def merge(self, other: "OpCounters") -> None:
        self.n_terms += other.n_terms
        self.n_mult += other.n_mult
        self.n_add += other.n_add
        self.n_canc += other.n_canc
        self.n_monomial_cmp += other.n_monomial_cmp

    def copy(self) -> "OpCounters":
        c = OpCounters()
        c.merge(self)
        return c

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.__slots__}

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in self.as_dict().items())
        return f"OpCounters({inner})"


# ---------------------------------------------------------------------------
# monomials


def mono_deg(m: Mono) -> int:
    return m[0]


def mono_exps(m: Mono) -> tuple:
    return m[1:]


def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(map(operator.add, a, b))


def mono_div(a: Mono, b: Mono) -> Mono:
    """Exact quotient a / b; caller guarantees divisibility."""
    return tuple(map(operator.sub, a, b))


def mono_divides(a: Mono, b: Mono) -> bool:
    if a[0] > b[0]:
        return False
    for x, y in zip(a[1:], b[1:]):
        if x > y:
            return False
    return True


def mono_lcm(a: Mono, b: Mono) -> Mono:
    exps = tuple(map(max, a[1:], b[1:]))
    return (sum(exps),) + exps


def monomial_divides(a, b: ModMono) -> bool:
    """Does a divide the module monomial b?  a may be a plain monomial
    (component-free divisibility) or a module monomial (components must
    match)."""
    if isinstance(a[0], tuple):  # module monomial
        return a[1] == b[1] and mono_divides(a[0], b[0])
    return mono_divides(a, b[0])


def module_lcm(a: ModMono, b: ModMono) -> Optional[ModMono]:
    """lcm of two module monomials; None encodes the zero result for
    mismatched components."""
    if a[1] != b[1]:
        return None
    return (mono_lcm(a[0], b[0]), a[1])


# ---------------------------------------------------------------------------
# vectors


def vector_add(f: Vec, g: Vec, p: int, counters: Optional[OpCounters] = None) -> Vec:
    """Sparse sum of two vectors.  Counts one addition per coefficient
    collision and one cancellation per collision summing to zero."""
    out = dict(f)
    n_add = n_canc = 0
    for mm, c in g.items():
        old = out.get(mm)
        if old is None:
            out[mm] = c
        else:
            n_add += 1
            v = (old + c) % p
            if v:
                out[mm] = v
            else:
                n_canc += 1
                del out[mm]
    if counters is not None:
        counters.n_add += n_add
        counters.n_canc += n_canc
    return out


def vec_iadd_scaled(dst: Vec, c: int, src: Vec, p: int,
                    counters: Optional[OpCounters] = None) -> None:
    """dst += c * src in place.

    Counts the collision additions/cancellations, plus len(src)
    multiplications unless c is +-1 (copy or negation, no field products).
    """
    n_add = n_canc = 0
    for mm, v in src.items():
        w = (c * v) % p
        old = dst.get(mm)
        if old is None:
            dst[mm] = w
        else:
            n_add += 1
            nv = (old + w) % p
            if nv:
                dst[mm] = nv
            else:
                n_canc += 1
                del dst[mm]
    if counters is not None:
        if c != 1 and c != p - 1:
            counters.n_mult += len(src)
        counters.n_add += n_add
        counters.n_canc += n_canc


def term_times_vector(c: int, mono: Mono, f: Vec, p: int,
                      counters: Optional[OpCounters] = None) -> Vec:
    """Product of the scalar term c*mono with a vector.

    One counted multiplication per term of f (identity coefficients
    included).  Multiplication by a monomial is injective and
    order-preserving, so the result keeps f's term order.
    """
    c %= p
    if c == 0:
        raise DomainError("term_times_vector requires a nonzero coefficient")
    if counters is not None:
        counters.n_mult += len(f)
    if c == 1:
        return {(mono_mul(mono, mm[0]), mm[1]): v for mm, v in f.items()}
    return {(mono_mul(mono, mm[0]), mm[1]): (c * v) % p for mm, v in f.items()}


def vec_scale(f: Vec, c: int, p: int, counters: Optional[OpCounters] = None) -> Vec:
    c %= p
    if c == 0:
        return {}
    if counters is not None:
        counters.n_mult += len(f)
    if c == 1:
        return dict(f)
    return {mm: (c * v) % p for mm, v in f.items()}


def vec_neg(f: Vec, p: int) -> Vec:
    return {mm: p - v for mm, v in f.items()}


def leading_term(f: Vec, key: Callable[[ModMono], tuple],
                 counters: Optional[OpCounters] = None):
    """The maximal term of f under the ordering realized by `key`.

    Returns a (module monomial, coefficient) pair; raises on the zero vector.
    """
    if not f:
        raise DomainError("leading term of the zero vector is undefined")
    it = iter(f)
    best = next(it)
    best_key = key(best)
    for mm in it:
        k = key(mm)
        if k > best_key:
            best, best_key = mm, k
    if counters is not None:
        counters.n_monomial_cmp += len(f) - 1
    return best, f[best]


def first_term(f: Vec):
    """Leading term of a normalized vector (first stored term, no scan)."""
    mm = next(iter(f))
    return mm, f[mm]


def vec_normalized(f: Vec, key: Callable[[ModMono], tuple]) -> Vec:
    """Rebuild f with terms in strictly decreasing order under `key`."""
    return {mm: f[mm] for mm in sorted(f, key=key, reverse=True)}


def vec_degrees(f: Vec, twists=None) -> set:
    """Set of (internal) degrees of the terms of f."""
    if twists is None:
        return {mm[0][0] for mm in f}
    return {mm[0][0] + twists[mm[1]] for mm in f}


def is_homogeneous(f: Vec, twists=None) -> bool:
    return len(vec_degrees(f, twists)) <= 1


# ---------------------------------------------------------------------------
# plain polynomials (used by minimization and the CLI)


def poly_add(a: Poly, b: Poly, p: int) -> Poly:
    out = dict(a)
    for m, c in b.items():
        v = (out.get(m, 0) + c) % p
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def poly_mul(a: Poly, b: Poly, p: int) -> Poly:
    out: Poly = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = mono_mul(m1, m2)
            v = (out.get(m, 0) + c1 * c2) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def vec_component(f: Vec, comp: int) -> Poly:
    """Extract the R-polynomial coefficient of basis element `comp`."""
    return {mm[0]: c for mm, c in f.items() if mm[1] == comp}
