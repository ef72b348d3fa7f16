"""Lifting leading syzygy terms to syzygies.

Three interchangeable lifting strategies plus the driver:

* ``lift_reduce`` - classical reduction: repeatedly cancel the leading term
  of the image, keeping the whole image polynomial and paying one
  leading-term scan (monomial comparisons) per step.
* ``lift_hybrid`` - drops lower order terms from the image and from every
  reducer, and keeps the remaining terms as an unordered bucket popped in
  insertion order, so no monomial comparisons are needed.
* ``lift_tree`` / ``lift_subtree`` - treats each non-lower-order term of the
  image independently, recursing into subtree liftings whose results are
  cached under coefficient-normalized keys and rescaled on reuse.

``syz_schreyer`` is the classical algorithm, retained as the baseline: it is
the same computation as the driver with the reduce strategy.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

from .algebra import (
    DomainError,
    ModMono,
    OpCounters,
    Vec,
    mono_div,
    mono_mul,
    term_times_vector,
    vec_iadd_scaled,
)
from .orderings import OrderingChain
from .frame import lead_syz
from .groebner import GroebnerBasis

LIFT_ALGORITHMS = ("schreyer", "reduce", "hybrid", "tree")


def _sub_term(dst: Vec, mm: ModMono, c: int, p: int,
              counters: Optional[OpCounters] = None) -> None:
    """dst -= c*mm (single syzygy bookkeeping term; negation, no product)."""
    old = dst.get(mm)
    if old is None:
        dst[mm] = p - c
        return
    if counters is not None:
        counters.n_add += 1
    v = (old - c) % p
    if v:
        dst[mm] = v
    else:
        if counters is not None:
            counters.n_canc += 1
        del dst[mm]


class SubtreeCache:
    """Cache of subtree liftings keyed by coefficient-normalized module
    monomials.

    Values are complete subtree liftings with leading coefficient 1; lookups
    scale by the requested coefficient.  ``store`` has first-write-wins
    semantics, so racing duplicate inserts from parallel lifts are benign.
    ``expansions`` counts computed subtrees (cache misses that led to work).
    """

    __slots__ = ("data", "hits", "expansions")

    def __init__(self):
        self.data: dict = {}
        self.hits = 0
        self.expansions = 0

    def get(self, key: ModMono):
        return self.data.get(key)

    def store(self, key: ModMono, value: Vec) -> Vec:
        return self.data.setdefault(key, value)

    def __len__(self):
        return len(self.data)


def psi(v: Vec, G: GroebnerBasis, counters: Optional[OpCounters] = None) -> Vec:
    """Image of v under the homomorphism sending basis element i to the i-th
    generator of G."""
    p = G.ring.p
    out: Vec = {}
    for (m, i), c in v.items():
        vec_iadd_scaled(out, c, term_times_vector(1, m, G.gens[i], p, None),
                        p, counters)
    return out


def lot_split(g: Vec, G: GroebnerBasis):
    """Split g into (lower order part, rest): a term is of lower order when
    no leading monomial of G divides it."""
    low: Vec = {}
    rest: Vec = {}
    divisor = G.divisor
    for mm, c in g.items():
        if divisor(mm) < 0:
            low[mm] = c
        else:
            rest[mm] = c
    return low, rest


def lot(g: Vec, G: GroebnerBasis) -> Vec:
    return lot_split(g, G)[0]


def _root_divisor(t_mm: ModMono, G: GroebnerBasis, s_key, key_up):
    """Smallest generator index i with LM(f_i) | t and s > (t/LT(f_i)) e_i
    under the induced ordering, advancing past indices that fail the
    ordering condition."""
    i = G.divisor(t_mm)
    if i < 0:
        raise DomainError(f"no divisor for {t_mm}; input is not a leading syzygy term")
    mono = t_mm[0]
    cand = (mono_div(mono, G.lms[i][0]), i)
    if key_up(cand) < s_key:
        return i, cand[0]
    for i in G.divisors_after(t_mm, i):
        cand = (mono_div(mono, G.lms[i][0]), i)
        if key_up(cand) < s_key:
            return i, cand[0]
    raise DomainError(f"no admissible divisor below {t_mm}; inconsistent input")


def _check_chain(G: GroebnerBasis, chain: OrderingChain) -> OrderingChain:
    if chain is None:
        return G.chain.extend(G.lms)
    if len(chain) != G.level + 1:
        raise DomainError("lifting expects the chain extended by G's leading terms")
    return chain


def lift_reduce(s: ModMono, G: GroebnerBasis, chain: OrderingChain,
                counters: Optional[OpCounters] = None) -> Vec:
    """Lifting of the leading syzygy term s by leading-term reduction of its
    image (the classical step of Schreyer's algorithm)."""
    chain = _check_chain(G, chain)
    p = G.ring.p
    key_up = chain.key_fn(G.level + 1)
    key_dn = chain.key_fn(G.level)
    s_key = key_up(s)
    g = psi({s: 1}, G, counters)
    sbar: Vec = {s: 1}
    keymemo: dict = {}
    while g:
        best = None
        best_key = None
        for mm in g:
            k = keymemo.get(mm)
            if k is None:
                k = keymemo[mm] = key_dn(mm)
            if best_key is None or k > best_key:
                best, best_key = mm, k
        if counters is not None:
            counters.n_monomial_cmp += len(g) - 1
        c = g[best]
        i, m = _root_divisor(best, G, s_key, key_up)
        vec_iadd_scaled(g, p - c, term_times_vector(1, m, G.gens[i], p, None),
                        p, counters)
        assert best not in g
        _sub_term(sbar, (m, i), c, p, counters)
    return sbar


def lift_hybrid(s: ModMono, G: GroebnerBasis, chain: OrderingChain,
                counters: Optional[OpCounters] = None) -> Vec:
    """Lifting of s with lower order terms dropped throughout and the
    remaining terms kept unordered (popped in insertion order)."""
    chain = _check_chain(G, chain)
    p = G.ring.p
    key_up = chain.key_fn(G.level + 1)
    s_key = key_up(s)
    _, g = lot_split(psi({s: 1}, G, counters), G)
    sbar: Vec = {s: 1}
    divisor = G.divisor
    while g:
        t_mm = next(iter(g))
        c = g[t_mm]
        i, m = _root_divisor(t_mm, G, s_key, key_up)
        # reducer = m*f_i with its lower order terms left out; coefficient
        # products are only performed (and counted) for the kept terms.
        reducer: Vec = {}
        for (fm, fc), fv in G.gens[i].items():
            prod = (mono_mul(m, fm), fc)
            if divisor(prod) >= 0:
                reducer[prod] = fv
        vec_iadd_scaled(g, p - c, reducer, p, counters)
        assert t_mm not in g
        _sub_term(sbar, (m, i), c, p, counters)
    return sbar


def _expand_subtree(key_mm: ModMono, G: GroebnerBasis):
    """Open one subtree node: image minus its head, split off lower order
    terms, list the child terms.  The expansion is coefficient-normalized
    (monic), so no field products are performed here."""
    p = G.ring.p
    m, i = key_mm
    g = term_times_vector(1, m, G.gens[i], p, None)
    head = next(iter(g))
    assert g.pop(head) == 1, "generators must be monic"
    _, rest = lot_split(g, G)
    return {"key": key_mm, "shat": {key_mm: 1},
            "children": list(rest.items()), "next": 0}


def lift_subtree(t: ModMono, coeff: int, G: GroebnerBasis,
                 cache: SubtreeCache, counters: Optional[OpCounters] = None) -> Vec:
    """Subtree lifting of the term coeff*t: leading term coeff*t, and every
    term of the tail of its image is of lower order w.r.t. G.

    Results are cached under the coefficient-normalized key and scaled by
    the coefficient on a hit.  Realized with an explicit work stack; no
    ordering condition is checked below the root (it always holds there).
    """
    p = G.ring.p
    value = cache.get(t)
    if value is None:
        cache.expansions += 1
        stack = [_expand_subtree(t, G)]
        parents = [None]  # (frame index, coefficient into parent)
        value = None
        while stack:
            fr = stack[-1]
            if fr["next"] < len(fr["children"]):
                child_mm, child_c = fr["children"][fr["next"]]
                fr["next"] += 1
                i = G.divisor(child_mm)
                assert i >= 0
                ck = (mono_div(child_mm[0], G.lms[i][0]), i)
                v = cache.get(ck)
                if v is None:
                    cache.expansions += 1
                    stack.append(_expand_subtree(ck, G))
                    parents.append((len(stack) - 2, child_c))
                else:
                    cache.hits += 1
                    vec_iadd_scaled(fr["shat"], p - child_c, v, p, counters)
            else:
                stack.pop()
                link = parents.pop()
                v = cache.store(fr["key"], fr["shat"])
                if link is None:
                    value = v
                else:
                    idx, c_in = link
                    vec_iadd_scaled(stack[idx]["shat"], p - c_in, v, p, counters)
    else:
        cache.hits += 1
    if coeff == 1:
        return dict(value)
    out: Vec = {mm: (coeff * v) % p for mm, v in value.items()}
    if counters is not None:
        counters.n_mult += len(value)
    return out


def lift_tree(s: ModMono, G: GroebnerBasis, chain: OrderingChain,
              cache: Optional[SubtreeCache] = None,
              counters: Optional[OpCounters] = None) -> Vec:
    """Lifting of s by independent subtree liftings of the non-lower-order
    terms of its image, with subtree results served from the cache."""
    chain = _check_chain(G, chain)
    if cache is None:
        cache = SubtreeCache()
    p = G.ring.p
    key_up = chain.key_fn(G.level + 1)
    s_key = key_up(s)
    _, T = lot_split(psi({s: 1}, G, counters), G)
    sbar: Vec = {s: 1}
    for t_mm, c in T.items():
        i, m = _root_divisor(t_mm, G, s_key, key_up)
        sub = lift_subtree((m, i), 1, G, cache, counters)
        vec_iadd_scaled(sbar, p - c, sub, p, counters)
    return sbar


def _lift_one(alg: str, s: ModMono, G: GroebnerBasis, chain: OrderingChain,
              cache: Optional[SubtreeCache], counters: OpCounters) -> Vec:
    if alg in ("schreyer", "reduce"):
        return lift_reduce(s, G, chain, counters)
    if alg == "hybrid":
        return lift_hybrid(s, G, chain, counters)
    if alg == "tree":
        return lift_tree(s, G, chain, cache, counters)
    raise DomainError(f"unknown lifting algorithm {alg!r}")


def lift_frame_terms(terms: Sequence[ModMono], G: GroebnerBasis,
                     chain: OrderingChain, alg: str = "tree",
                     counters: Optional[OpCounters] = None,
                     cache: Optional[SubtreeCache] = None,
                     threads: int = 1) -> list:
    """Lift the given frame terms in order; with threads > 1, distinct terms
    are lifted concurrently with per-worker counters merged at the end."""
    if alg not in LIFT_ALGORITHMS:
        raise DomainError(f"unknown lifting algorithm {alg!r}")
    chain = _check_chain(G, chain)
    if cache is None and alg == "tree":
        cache = SubtreeCache()
    if counters is None:
        counters = OpCounters()
    if threads <= 1 or len(terms) <= 1:
        return [_lift_one(alg, s, G, chain, cache, counters) for s in terms]
    locals_ = [OpCounters() for _ in terms]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_lift_one, alg, s, G, chain, cache, locals_[k])
                   for k, s in enumerate(terms)]
        out = [f.result() for f in futures]
    for c in locals_:
        counters.merge(c)
    return out


def syz_lift(G: GroebnerBasis, chain: Optional[OrderingChain] = None,
             alg: str = "tree", counters: Optional[OpCounters] = None,
             cache: Optional[SubtreeCache] = None, threads: int = 1) -> list:
    """Groebner basis of the syzygy module of G w.r.t. the induced ordering:
    one lifting per minimal leading syzygy term, in canonical frame order."""
    chain = _check_chain(G, chain)
    level = lead_syz(G.lms, chain.base, G.degrees)
    return lift_frame_terms(level.terms, G, chain, alg, counters, cache, threads)


def syz_schreyer(G: GroebnerBasis, chain: Optional[OrderingChain] = None,
                 counters: Optional[OpCounters] = None) -> list:
    """Classical Schreyer syzygies: the driver with the reduce strategy."""
    return syz_lift(G, chain, alg="reduce", counters=counters)
