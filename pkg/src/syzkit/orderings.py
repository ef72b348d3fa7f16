"""Base monomial orderings and chains of Schreyer-induced module orderings.

The comparison of module monomials at level k of a chain descends through the
stored leading monomials of the generators one level down.  Instead of
recursing per comparison, each chain level caches the full descent of its
generators to level 0: an accumulated base-ring monomial (``path_monos``) and
the visited component chain (``tails``, with the level-0 component negated so
that plain tuple comparison realizes the order).  A comparison then costs one
monomial product, one base-ordering comparison and an integer-tuple tiebreak.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

from .algebra import (
    DomainError,
    ModMono,
    Mono,
    OpCounters,
    Vec,
    leading_term,
    mono_mul,
)

ORDER_KINDS = ("dp", "lp")  # degree reverse lexicographic / lexicographic


class BaseOrdering:
    """A global monomial ordering on the base ring: 'dp' or 'lp'."""

    __slots__ = ("kind", "nvars")

    def __init__(self, kind: str, nvars: int):
        if kind not in ORDER_KINDS:
            raise DomainError(f"unknown ordering {kind!r}; expected one of {ORDER_KINDS}")
        self.kind = kind
        self.nvars = nvars

    def key(self, m: Mono) -> tuple:
        if self.kind == "lp":
            return m[1:]
        # degrevlex: total degree first, then negated reversed exponents
        return (m[0],) + tuple(-e for e in m[:0:-1])

    def key_func(self) -> Callable[[Mono], tuple]:
        if self.kind == "lp":
            return lambda m: m[1:]
        return lambda m: (m[0],) + tuple(-e for e in m[:0:-1])

    def cmp(self, a: Mono, b: Mono) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def __repr__(self):
        return f"BaseOrdering({self.kind!r}, nvars={self.nvars})"

    def __eq__(self, other):
        return (isinstance(other, BaseOrdering)
                and self.kind == other.kind and self.nvars == other.nvars)


def cmp_base(a: Mono, b: Mono, ordering: BaseOrdering,
             counters: Optional[OpCounters] = None) -> int:
    """Three-way comparison of base-ring monomials: -1, 0 or 1."""
    if counters is not None:
        counters.n_monomial_cmp += 1
    return ordering.cmp(a, b)


class _Level:
    __slots__ = ("lms", "path_monos", "tails")

    def __init__(self, lms, path_monos, tails):
        self.lms = lms            # leading monomials of the generators below
        self.path_monos = path_monos  # descent image monomials at level 0
        self.tails = tails        # component chains (-c0, c1, ..., c_{k-1})

    @property
    def rank(self):
        return len(self.lms)


class OrderingChain:
    """A base ordering plus induced-ordering data for each resolution level.

    Level 0 compares monomials of F_0 term-over-position (base ordering on the
    monomial, smaller component wins ties).  Level k >= 1 compares via the
    leading terms of the generators recorded one level down, breaking exact
    ties by the larger component.  Immutable: :meth:`extend` returns a new
    chain.
    """

    __slots__ = ("base", "levels")

    def __init__(self, base: BaseOrdering, levels: tuple = ()):
        self.base = base
        self.levels = tuple(levels)

    def __len__(self):
        return len(self.levels)

    def key_fn(self, level: int) -> Callable[[ModMono], tuple]:
        """A key function realizing the level-`level` ordering: plain tuple
        comparison of keys agrees with the induced ordering."""
        base_key = self.base.key_func()
        if level == 0:
            return lambda mm: base_key(mm[0]) + (-mm[1],)
        if level > len(self.levels):
            raise DomainError(f"chain has {len(self.levels)} levels, no level {level}")
        lev = self.levels[level - 1]
        pms = lev.path_monos
        tails = lev.tails

        def key(mm, _bk=base_key, _pms=pms, _tails=tails):
            m, i = mm
            return _bk(mono_mul(m, _pms[i])) + _tails[i] + (i,)

        return key

    def key(self, level: int, mm: ModMono) -> tuple:
        return self.key_fn(level)(mm)

    def cmp(self, a: ModMono, b: ModMono, level: int,
            counters: Optional[OpCounters] = None) -> int:
        if counters is not None:
            counters.n_monomial_cmp += 1
        fn = self.key_fn(level)
        ka, kb = fn(a), fn(b)
        return (ka > kb) - (ka < kb)

    def extend(self, lms: Sequence[ModMono]) -> "OrderingChain":
        """One more level, induced by generators with the given leading
        monomials (which live at the current top level)."""
        top = len(self.levels)
        lms = tuple(lms)
        for mm in lms:
            if not (isinstance(mm, tuple) and isinstance(mm[0], tuple)):
                raise DomainError("extend expects module monomials")
        if top == 0:
            pms = tuple(m for m, _ in lms)
            tails = tuple((-c,) for _, c in lms)
        else:
            prev = self.levels[-1]
            for _, c in lms:
                if not 0 <= c < prev.rank:
                    raise DomainError("leading monomial component out of range")
            pms = tuple(mono_mul(m, prev.path_monos[c]) for m, c in lms)
            tails = tuple(prev.tails[c] + (c,) for _, c in lms)
        return OrderingChain(self.base, self.levels + (_Level(lms, pms, tails),))

    def image_monomial(self, level: int, mm: ModMono) -> Mono:
        """Descent image of a level-`level` module monomial in the base ring."""
        if level == 0:
            return mm[0]
        lev = self.levels[level - 1]
        return mono_mul(mm[0], lev.path_monos[mm[1]])


def cmp_induced(a: ModMono, b: ModMono, chain: OrderingChain, level: int,
                counters: Optional[OpCounters] = None) -> int:
    """Three-way comparison under the level-`level` induced ordering."""
    return chain.cmp(a, b, level, counters)


def extend_chain(chain: OrderingChain, generators: Sequence[Vec],
                 counters: Optional[OpCounters] = None) -> OrderingChain:
    """Extend a chain by the leading monomials of new generators living at
    the chain's current top level."""
    top = len(chain)
    key = chain.key_fn(top)
    lms = []
    for g in generators:
        if not g:
            raise DomainError("cannot extend an ordering chain by a zero generator")
        mm, _ = leading_term(g, key, counters)
        lms.append(mm)
    return chain.extend(lms)


REORDER_MODES = ("negdegrevlex", "none", "input")


def reorder_permutation(terms: Sequence[ModMono], chain: OrderingChain,
                        level: int, mode: str = "negdegrevlex") -> list:
    """Permutation of indices sorting generators with the given leading
    monomials for use at the next resolution step.

    The default key lists generators by ascending total degree of the
    leading-monomial image, breaking ties by descending base ordering on the
    image and then by ascending component; this realizes sorting w.r.t. the
    negative degree reverse lexicographic ordering when the base is 'dp'.
    """
    if mode not in REORDER_MODES:
        raise DomainError(f"unknown reorder mode {mode!r}")
    idxs = list(range(len(terms)))
    if mode in ("none", "input"):
        return idxs
    images = [chain.image_monomial(level, mm) for mm in terms]
    base_key = chain.base.key_func()
    idxs.sort(key=lambda i: terms[i][1])                    # component asc
    idxs.sort(key=lambda i: base_key(images[i]), reverse=True)  # image desc
    idxs.sort(key=lambda i: images[i][0])                   # degree asc
    return idxs
