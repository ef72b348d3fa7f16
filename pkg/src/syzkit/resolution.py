"""Free resolutions: the level-by-level driver, Betti tables, minimization,
constant strands and the Hilbert-series consistency oracle.

A resolution stores its differentials column-wise: ``diffs[k-1]`` is the list
of columns of the map F_k -> F_{k-1}, each column a module vector normalized
under the level-(k-1) induced ordering.  Reordering generators between levels
permutes columns only; component indices always refer to the previous level's
(already fixed) basis, so no index rewriting is ever needed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    DomainError,
    OpCounters,
    Poly,
    Ring,
    Vec,
    first_term,
    is_homogeneous,
    mono_deg,
    mono_divides,
    mono_mul,
    term_times_vector,
    vec_component,
    vec_iadd_scaled,
    vec_normalized,
)
from .orderings import (
    BaseOrdering,
    OrderingChain,
    REORDER_MODES,
    reorder_permutation,
)
from .groebner import GroebnerBasis, buchberger
from .frame import lead_syz
from .lift import LIFT_ALGORITHMS, SubtreeCache, lift_frame_terms


@dataclass(frozen=True)
class GradedFreeModule:
    rank: int
    twists: Optional[tuple] = None  # None when ungraded

    def __post_init__(self):
        if self.twists is not None:
            object.__setattr__(self, "twists", tuple(self.twists))
            if len(self.twists) != self.rank:
                raise DomainError("rank and twist count differ")


class BettiTable:
    """Graded Betti numbers beta_{k,j}, displayed with rows j - k."""

    def __init__(self, data: dict):
        self.data = {kj: v for kj, v in data.items() if v}

    def get(self, k: int, j: int) -> int:
        return self.data.get((k, j), 0)

    @property
    def max_level(self) -> int:
        return max((k for k, _ in self.data), default=0)

    def totals(self) -> list:
        out = [0] * (self.max_level + 1)
        for (k, _), v in self.data.items():
            out[k] += v
        return out

    def euler(self) -> dict:
        """Alternating sum over levels: degree -> coefficient (in Z)."""
        out: dict = {}
        for (k, j), v in self.data.items():
            out[j] = out.get(j, 0) + (v if k % 2 == 0 else -v)
        return {j: c for j, c in out.items() if c}

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.data == other.data

    def add(self, other: "BettiTable") -> "BettiTable":
        data = dict(self.data)
        for kj, v in other.data.items():
            data[kj] = data.get(kj, 0) + v
        return BettiTable(data)

    def format(self) -> str:
        """Paper-style layout: columns are levels, rows are j - k, dashes for
        zeros, a totals row at the bottom."""
        if not self.data:
            return "(empty)\n"
        kmax = self.max_level
        rows = sorted({j - k for k, j in self.data})
        rmin, rmax = rows[0], rows[-1]
        width = max(6, max(len(str(v)) for v in self.data.values()) + 2)
        head = " " * 7 + "".join(str(k).rjust(width) for k in range(kmax + 1))
        lines = [head]
        for r in range(rmin, rmax + 1):
            cells = []
            for k in range(kmax + 1):
                v = self.get(k, k + r)
                cells.append((str(v) if v else "-").rjust(width))
            lines.append(f"{r}:".rjust(7) + "".join(cells))
        lines.append("-" * len(head))
        lines.append("total:".rjust(7)
                     + "".join(str(t).rjust(width) for t in self.totals()))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"BettiTable({self.data!r})"


class Resolution:
    """A chain of free modules and sparse differentials over F_p."""

    def __init__(self, ring: Ring, base: BaseOrdering, chain: OrderingChain,
                 modules: list, diffs: list, stats: OpCounters,
                 graded: bool, minimal: bool = False, level_times=None):
        self.ring = ring
        self.base = base
        self.chain = chain
        self.modules = modules
        self.diffs = diffs  # diffs[k-1]: columns of phi_k, vectors in F_{k-1}
        self.stats = stats
        self.graded = graded
        self.minimal = minimal
        self.level_times = level_times or []

    @property
    def length(self) -> int:
        return len(self.diffs)

    def differential_entry(self, k: int, i: int, j: int) -> Poly:
        """Entry (i, j) of phi_k as a polynomial of R (1-based level k)."""
        return vec_component(self.diffs[k - 1][j], i)

    def term_count(self, k: int) -> int:
        return sum(len(col) for col in self.diffs[k - 1])

    def entry_count(self, k: int) -> int:
        return self.modules[k].rank * self.modules[k - 1].rank

    def q_sparse(self) -> Optional[float]:
        entries = sum(self.entry_count(k) for k in range(2, self.length + 1))
        if not entries:
            return None
        terms = sum(self.term_count(k) for k in range(2, self.length + 1))
        return terms / entries

    def check_complex(self, counters: Optional[OpCounters] = None) -> bool:
        """phi_k o phi_{k+1} == 0, by sparse multiplication."""
        p = self.ring.p
        for k in range(1, self.length):
            prev_cols = self.diffs[k - 1]
            for col in self.diffs[k]:
                acc: Vec = {}
                for (m, i), c in col.items():
                    vec_iadd_scaled(acc, c,
                                    term_times_vector(1, m, prev_cols[i], p, None),
                                    p, counters)
                if acc:
                    return False
        return True

    def chain_prefix(self, level: int) -> OrderingChain:
        return OrderingChain(self.base, self.chain.levels[:level])

    def has_constant_entries(self) -> bool:
        one = self.ring.one
        return any(mm[0] == one for cols in self.diffs for col in cols for mm in col)


def resolve(gens: Sequence[Vec], ring: Ring, base: BaseOrdering,
            alg: str = "tree", max_length: Optional[int] = None,
            reorder: str = "negdegrevlex", threads: int = 1,
            counters: Optional[OpCounters] = None, rank0: int = 1,
            twists0: Optional[Sequence[int]] = None,
            gb: Optional[GroebnerBasis] = None) -> Resolution:
    """Free resolution of R^rank0 / <gens> by iterated syzygy lifting.

    Computes the reduced Groebner basis of the input, then repeatedly lifts
    the minimal leading syzygy terms level by level, reordering each new
    generator set and extending the chain of induced orderings.  ``n_terms``
    in the returned stats excludes the first differential.
    """
    if alg not in LIFT_ALGORITHMS:
        raise DomainError(f"unknown lifting algorithm {alg!r}")
    if reorder not in REORDER_MODES:
        raise DomainError(f"unknown reorder mode {reorder!r}")
    counters = counters if counters is not None else OpCounters()
    if twists0 is None:
        twists0 = (0,) * rank0
    twists0 = tuple(twists0)
    graded = all(is_homogeneous(g, twists0) for g in gens)
    if gb is None:
        gb = buchberger(gens, ring, base, rank=rank0, twists=twists0,
                        keep_input_order=(reorder == "input"))
    graded = graded and (not gb.gens or gb.degrees is not None)
    modules = [GradedFreeModule(rank0, twists0 if graded else None)]
    diffs: list = []
    level_times: list = []
    chain = OrderingChain(base)
    if not gb.gens:
        return Resolution(ring, base, chain, modules, diffs, counters, graded,
                          minimal=True, level_times=level_times)
    G = gb
    modules.append(GradedFreeModule(len(G.gens), G.degrees if graded else None))
    diffs.append(list(G.gens))
    sanity_cap = ring.nvars + rank0 + 2
    while max_length is None or len(diffs) < max_length:
        t0 = time.perf_counter()
        level = len(diffs)  # syzygies about to be computed live in F_level
        frame = lead_syz(G.lms, base, G.degrees)
        if not frame.terms:
            break
        if level > sanity_cap:
            raise RuntimeError("resolution exceeds the Hilbert syzygy bound; "
                               "internal inconsistency")
        ext = G.chain.extend(G.lms)
        lifted = lift_frame_terms(frame.terms, G, ext, alg, counters,
                                  cache=SubtreeCache() if alg == "tree" else None,
                                  threads=threads)
        perm = reorder_permutation(frame.terms, ext, level, reorder)
        frame = frame.permuted(perm)
        lifted = [lifted[i] for i in perm]
        key = ext.key_fn(level)
        cols = []
        for s, v in zip(frame.terms, lifted):
            v = vec_normalized(v, key)
            mm, c = first_term(v)
            if mm != s or c != 1:
                raise RuntimeError("lifting lost its leading term")
            cols.append(v)
        diffs.append(cols)
        modules.append(GradedFreeModule(len(cols),
                                        tuple(frame.degrees) if graded else None))
        counters.n_terms += sum(len(v) for v in cols)
        ambient = modules[level]
        G = GroebnerBasis(ring, ext, cols, level=level, rank=ambient.rank,
                          twists=ambient.twists or (0,) * ambient.rank)
        level_times.append(time.perf_counter() - t0)
    res = Resolution(ring, base, G.chain.extend(G.lms) if diffs else chain,
                     modules, diffs, counters, graded,
                     level_times=level_times)
    res.minimal = not res.has_constant_entries()
    return res


def reorder_generators(gens: Sequence[Vec], chain: OrderingChain,
                       mode: str = "negdegrevlex"):
    """Sort generators living at the chain's top level with the between-level
    key; returns (sorted generators, permutation)."""
    top = len(chain)
    key = chain.key_fn(top)
    lms = [max(g, key=key) for g in gens]
    perm = reorder_permutation(lms, chain, top, mode)
    return [gens[i] for i in perm], perm


# ---------------------------------------------------------------------------
# Betti tables


def betti_nonminimal(res: Resolution) -> BettiTable:
    if not res.graded:
        raise DomainError("Betti numbers require a graded resolution")
    data: dict = {}
    for k, mod in enumerate(res.modules):
        for t in mod.twists:
            data[(k, t)] = data.get((k, t), 0) + 1
    return BettiTable(data)


def constant_block(res: Resolution, k: int, j: int) -> np.ndarray:
    """Degree-j constant strand of phi_k: rows are the degree-j basis
    elements of F_{k-1}, columns those of F_k; entries in F_p."""
    if not res.graded:
        raise DomainError("constant strands require a graded resolution")
    rows = [i for i, t in enumerate(res.modules[k - 1].twists) if t == j]
    cols = [c for c, t in enumerate(res.modules[k].twists) if t == j]
    row_pos = {i: a for a, i in enumerate(rows)}
    mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
    one = res.ring.one
    for b, c in enumerate(cols):
        for (m, comp), v in res.diffs[k - 1][c].items():
            if m == one and comp in row_pos:
                mat[row_pos[comp], b] = v
    return mat


def block_rank(mat: np.ndarray, p: int) -> int:
    """Rank over F_p by Gaussian elimination."""
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        piv = None
        for r in range(rank, rows):
            if a[r, c]:
                piv = r
                break
        if piv is None:
            continue
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        below = a[rank + 1:, c]
        nz = np.nonzero(below)[0]
        if nz.size:
            a[rank + 1 + nz] = (a[rank + 1 + nz]
                                - np.outer(below[nz], a[rank])) % p
        rank += 1
    return rank


def betti_minimal_from_nonminimal(res: Resolution) -> BettiTable:
    """Minimal Betti numbers from the constant strands: beta^min_{k,j} =
    beta_{k,j} - rank B_{k,j} - rank B_{k+1,j}."""
    nonmin = betti_nonminimal(res)
    p = res.ring.p
    ranks: dict = {}

    def strand_rank(k, j):
        if k < 1 or k > res.length:
            return 0
        r = ranks.get((k, j))
        if r is None:
            r = ranks[(k, j)] = block_rank(constant_block(res, k, j), p)
        return r

    data: dict = {}
    for (k, j), v in nonmin.data.items():
        m = v - strand_rank(k, j) - strand_rank(k + 1, j)
        if m < 0:
            raise RuntimeError("negative minimal Betti number; invalid strand data")
        if m:
            data[(k, j)] = m
    return BettiTable(data)


# ---------------------------------------------------------------------------
# minimization


def minimize(res: Resolution) -> Resolution:
    """Remove all constant (degree-zero) entries by Gaussian elimination of
    unit entries, one basis-element pair at a time."""
    if not res.graded:
        raise DomainError("minimization requires a graded resolution")
    ring = res.ring
    p = ring.p
    one = ring.one
    diffs = [[dict(col) for col in cols] for cols in res.diffs]
    twists = [list(m.twists) for m in res.modules]

    def find_unit():
        for k in range(1, len(diffs) + 1):
            for j, col in enumerate(diffs[k - 1]):
                for (m, comp), v in col.items():
                    if m == one:
                        return k, comp, j, v
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        k, i0, j0, c = hit
        cinv = ring.inv(c)
        cols = diffs[k - 1]
        pivot = cols[j0]
        for j, col in enumerate(cols):
            if j == j0:
                continue
            e = vec_component(col, i0)
            if not e:
                continue
            q = {m: (v * cinv) % p for m, v in e.items()}  # entry / c
            for qm, qv in q.items():
                for (pm, pcomp), pv in pivot.items():
                    mm = (mono_mul(qm, pm), pcomp)
                    w = (col.get(mm, 0) - qv * pv) % p
                    if w:
                        col[mm] = w
                    else:
                        col.pop(mm, None)
        # row i0 is now zero outside column j0; drop the pair and reindex
        del cols[j0]
        for col in cols:
            stale = [mm for mm in col if mm[1] == i0]
            for mm in stale:
                del col[mm]  # identically zero after the column operations
            rekey = [(mm, v) for mm, v in col.items() if mm[1] > i0]
            for mm, v in rekey:
                del col[mm]
            for (m, comp), v in rekey:
                col[(m, comp - 1)] = v
        if k < len(diffs):
            for col in diffs[k]:
                stale = [mm for mm in col if mm[1] == j0]
                for mm in stale:
                    del col[mm]  # coordinate vanishes in the new basis
                rekey = [(mm, v) for mm, v in col.items() if mm[1] > j0]
                for mm, v in rekey:
                    del col[mm]
                for (m, comp), v in rekey:
                    col[(m, comp - 1)] = v
        del twists[k][j0]
        del twists[k - 1][i0]
        if k >= 2:
            del diffs[k - 2][i0]
        while diffs and not diffs[-1]:
            diffs.pop()
            twists.pop()
    modules = [GradedFreeModule(len(t), tuple(t)) for t in twists]
    out = Resolution(ring, res.base, res.chain, modules, diffs,
                     res.stats.copy(), graded=True, minimal=True,
                     level_times=list(res.level_times))
    assert not out.has_constant_entries()
    return out


# ---------------------------------------------------------------------------
# Hilbert series oracle


def hilbert_numerator(lead_monomials, nvars: int,
                      twists0: Optional[Sequence[int]] = None) -> dict:
    """Numerator of the Hilbert series of F_0/<lead_monomials> over the
    common denominator (1-t)^nvars, as a degree -> coefficient dict.

    Accepts module monomials (grouped per component, shifted by the twist)
    or plain monomials; uses the pivot-variable splitting recursion for
    monomial ideals.
    """
    by_comp: dict = {}
    for mm in lead_monomials:
        if isinstance(mm[0], tuple):
            by_comp.setdefault(mm[1], []).append(mm[0])
        else:
            by_comp.setdefault(0, []).append(mm)
    rank = 1 + max(by_comp, default=0)
    if twists0 is None:
        twists0 = (0,) * rank
    if len(twists0) < rank:
        raise DomainError("twist list shorter than the component range")
    out: dict = {}
    for comp in range(len(twists0)):
        n = _hilbert_ideal(tuple(sorted(by_comp.get(comp, []))), nvars)
        shift = twists0[comp]
        for d, c in n.items():
            out[d + shift] = out.get(d + shift, 0) + c
    return {d: c for d, c in out.items() if c}


def _minimalize(gens):
    gens = sorted(set(gens), key=lambda m: (mono_deg(m), m))
    out = []
    for g in gens:
        if not any(mono_divides(h, g) for h in out):
            out.append(g)
    return tuple(out)


def _poly1_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for da, ca in a.items():
        for db, cb in b.items():
            out[da + db] = out.get(da + db, 0) + ca * cb
    return {d: c for d, c in out.items() if c}


_hilb_memo: dict = {}


def _hilbert_ideal(gens: tuple, nvars: int) -> dict:
    gens = _minimalize(gens)
    memo_key = (gens, nvars)
    cached = _hilb_memo.get(memo_key)
    if cached is not None:
        return dict(cached)
    if not gens:
        return {0: 1}
    if any(mono_deg(g) == 0 for g in gens):
        return {}
    pivot_var = None
    for g in gens:
        if sum(1 for e in g[1:] if e) > 1:
            # pivot on a variable of this mixed generator, preferring the one
            # hitting the most generators; splitting on it always simplifies
            candidates = [v for v in range(nvars) if g[1 + v]]
            pivot_var = max(candidates,
                            key=lambda v: sum(1 for h in gens if h[1 + v]))
            break
    if pivot_var is None:
        # pairwise coprime pure powers: product of (1 - t^deg)
        out = {0: 1}
        for g in gens:
            out = _poly1_mul(out, {0: 1, mono_deg(g): -1})
        _hilb_memo[memo_key] = dict(out)
        return out
    x = (1,) + tuple(1 if i == pivot_var else 0 for i in range(nvars))
    plus = _hilbert_ideal(gens + (x,), nvars)
    quot = _hilbert_ideal(tuple(
        (g[0] - 1,) + g[1:1 + pivot_var] + (g[1 + pivot_var] - 1,) + g[2 + pivot_var:]
        if g[1 + pivot_var] else g
        for g in gens), nvars)
    out = dict(plus)
    for d, c in quot.items():
        out[d + 1] = out.get(d + 1, 0) + c
    out = {d: c for d, c in out.items() if c}
    _hilb_memo[memo_key] = dict(out)
    return out
