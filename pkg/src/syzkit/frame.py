"""Minimal generators of leading syzygy modules and the Schreyer frame.

Everything here works on leading terms only: frame level k+1 is computed
from the leading monomials of level k, so the whole tower of leading syzygy
modules (and hence the shape of the resolution, its twists and non-minimal
Betti numbers) is available before any actual lifting happens.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebra import (
    DomainError,
    ModMono,
    mono_deg,
    mono_div,
    mono_divides,
    mono_lcm,
)
from .orderings import BaseOrdering, OrderingChain, reorder_permutation
from .groebner import GroebnerBasis


@dataclass
class FrameLevel:
    """Minimal generating set of one leading syzygy module.

    ``terms[t] == m * e_i`` for the recorded ``source_pairs[t] == (i, j)``
    with j < i and m = m_{ji}; ``degrees[t]`` is deg(m) + degree of generator
    i one level down (homogeneous case; None when ungraded).
    """

    terms: list
    source_pairs: list
    degrees: Optional[list] = None

    def __len__(self):
        return len(self.terms)

    def permuted(self, perm: Sequence[int]) -> "FrameLevel":
        return FrameLevel(
            [self.terms[i] for i in perm],
            [self.source_pairs[i] for i in perm],
            None if self.degrees is None else [self.degrees[i] for i in perm],
        )


def lead_syz(leading_monomials: Sequence[ModMono], base: BaseOrdering,
             degrees: Optional[Sequence[int]] = None) -> FrameLevel:
    """Minimal generators of the leading syzygy module of the given leading
    monomials, by pairwise candidate generation and divisibility pruning.

    Pairs with mismatched components are skipped up front (their lcm is
    zero).  The result is order-normalized: ascending component, then
    descending base ordering on the cofactor monomial.
    """
    lms = list(leading_monomials)
    kept: list = []  # [module monomial, (i, j)]
    for i in range(1, len(lms)):
        mi, ci = lms[i]
        for j in range(i):
            mj, cj = lms[j]
            if ci != cj:
                continue
            t = (mono_div(mono_lcm(mi, mj), mi), i)
            dead = False
            for entry in kept[:]:
                s = entry[0]
                if s[1] == t[1] and mono_divides(s[0], t[0]):
                    dead = True
                    break
                if s[1] == t[1] and mono_divides(t[0], s[0]):
                    kept.remove(entry)
            if not dead:
                kept.append([t, (i, j)])
    bk = base.key_func()
    kept.sort(key=lambda e: bk(e[0][0]), reverse=True)
    kept.sort(key=lambda e: e[0][1])
    level = FrameLevel([e[0] for e in kept], [e[1] for e in kept])
    if degrees is not None:
        level.degrees = [mono_deg(t[0]) + degrees[t[1]] for t in level.terms]
    return level


@dataclass
class SchreyerFrame:
    """Frame levels in generator order (reordering between levels applied),
    together with the chain of induced orderings they define."""

    levels: list = field(default_factory=list)
    chain: Optional[OrderingChain] = None

    def __len__(self):
        return len(self.levels)


def build_frame(G: GroebnerBasis, max_length: Optional[int] = None,
                reorder: str = "negdegrevlex") -> SchreyerFrame:
    """The Schreyer frame of G, built inductively from leading terms alone.

    Applies the same between-level reordering the resolution driver uses, so
    frame levels match the generator order of the computed resolution
    column-for-column.
    """
    if not G.gens:
        return SchreyerFrame([], G.chain)
    base = G.chain.base
    chain = G.chain.extend(G.lms)
    lms = list(G.lms)
    degrees = list(G.degrees) if G.degrees is not None else None
    frame = SchreyerFrame([], chain)
    while max_length is None or len(frame.levels) < max_length:
        level = lead_syz(lms, base, degrees)
        if not level.terms:
            break
        perm = reorder_permutation(level.terms, chain, len(chain), reorder)
        level = level.permuted(perm)
        frame.levels.append(level)
        chain = chain.extend(level.terms)
        lms = level.terms
        degrees = level.degrees
    frame.chain = chain
    return frame


def frame_betti(frame: SchreyerFrame, G: GroebnerBasis,
                twists0: Optional[Sequence[int]] = None):
    """Non-minimal Betti table read off the frame: level 0 from the ambient
    twists, level 1 from the generator degrees, level k+1 from frame level k
    term degrees."""
    from .resolution import BettiTable  # deferred: resolution imports frame

    if G.degrees is None:
        raise DomainError("frame Betti numbers require homogeneous input")
    if twists0 is None:
        twists0 = G.twists
    table: dict = {}
    for t in twists0:
        table[(0, t)] = table.get((0, t), 0) + 1
    for d in G.degrees:
        table[(1, d)] = table.get((1, d), 0) + 1
    for k, level in enumerate(frame.levels, start=2):
        if level.degrees is None:
            raise DomainError("frame level without degrees")
        for d in level.degrees:
            table[(k, d)] = table.get((k, d), 0) + 1
    return BettiTable(table)
