"""Benchmark ideal generation: apolar (Artinian graded Gorenstein) ideals of
sums of powers of random linear forms, plus dense random homogeneous ideals
for property testing.

A form f = l_1^d + ... + l_s^d is represented by its divided-power
coordinates u_beta = sum_i a_i^beta (the coefficient of x^beta in f divided
by the multinomial coefficient).  In these coordinates the degree-e
catalecticant is Cat_e[gamma, alpha] = u_{alpha+gamma}; its kernel is the
degree-e piece of the annihilator ideal, and the ideal is generated in
degrees <= d+1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import DomainError, Ring, Vec, is_prime, mono_mul
from .orderings import BaseOrdering
from .groebner import monomials_of_degree


@dataclass(frozen=True)
class AgrSpec:
    """Parameters for an apolar Gorenstein ideal: n+1 variables, socle degree
    d, s random linear forms over F_p, seeded RNG."""

    n: int
    d: int
    s: int
    p: int
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.d < 1 or self.s < 1:
            raise DomainError("AGR parameters must satisfy n, d, s >= 1")
        if not is_prime(self.p) or self.p <= self.d:
            raise DomainError("AGR characteristic must be a prime > d")


@dataclass
class AgrIdeal:
    """Generated apolar ideal with the data needed for verification."""

    spec: AgrSpec
    ring: Ring
    generators: list          # minimal homogeneous generators, as vectors
    hilbert: list             # h_e = rank of Cat_e for e = 0..d
    forms: list               # coefficient rows of the linear forms
    contraction: dict         # divided-power coordinates u_beta, |beta| <= d


def _kernel_basis(A: np.ndarray, p: int):
    """Kernel basis of A over F_p via reduced row echelon; canonical: one
    vector per free column with unit there and pivot back-substitutions."""
    a = A % p
    rows, cols = a.shape
    pivots = []  # (row, col)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = None
        for rr in range(r, rows):
            if a[rr, c]:
                piv = rr
                break
        if piv is None:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        other = np.nonzero(a[:, c])[0]
        other = other[other != r]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        pivots.append((r, c))
        r += 1
    pivot_cols = {c for _, c in pivots}
    basis = []
    for c in range(cols):
        if c in pivot_cols:
            continue
        v = np.zeros(cols, dtype=np.int64)
        v[c] = 1
        for r0, c0 in pivots:
            if a[r0, c]:
                v[c0] = (-a[r0, c]) % p
        basis.append(v)
    return basis, len(pivots)


def _row_space_insert(rows: list, pivcols: dict, row: np.ndarray, p: int) -> bool:
    while True:
        nz = np.nonzero(row)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        r = pivcols.get(c)
        if r is None:
            row = (row * pow(int(row[c]), p - 2, p)) % p
            pivcols[c] = len(rows)
            rows.append(row)
            return True
        row = (row - row[c] * rows[r]) % p


def gen_agr(spec: AgrSpec, max_retries: int = 5) -> AgrIdeal:
    """Apolar ideal of f = l_1^d + ... + l_s^d for seeded random linear
    forms, as a minimal homogeneous generating set.

    Deterministic per spec: retries on a degenerate form keep drawing from
    the same seeded stream.  Linear forms are uniform with a nonzero first
    coefficient.
    """
    p = spec.p
    nv = spec.n + 1
    ring = Ring(p, tuple(f"x{i}" for i in range(nv)))
    base = BaseOrdering("dp", nv)
    rng = random.Random(spec.seed)
    monos = {e: monomials_of_degree(nv, e, base) for e in range(spec.d + 2)}
    for _ in range(max_retries):
        forms = [[rng.randrange(1, p)] + [rng.randrange(p) for _ in range(nv - 1)]
                 for _ in range(spec.s)]
        u: dict = {}
        for e in range(spec.d + 1):
            for m in monos[e]:
                total = 0
                for a in forms:
                    prod = 1
                    for v, exp in enumerate(m[1:]):
                        if exp:
                            prod = (prod * pow(a[v], exp, p)) % p
                    total += prod
                u[m] = total % p
        if any(u[m] for m in monos[spec.d]):
            break
    else:
        raise DomainError("degenerate apolar form after retries")

    generators: list = []
    hilbert = [1]
    kernel_prev: list = []  # kernel vectors of the previous degree
    for e in range(1, spec.d + 1):
        cols = monos[e]
        rows = monos[spec.d - e]
        index = {m: i for i, m in enumerate(cols)}
        cat = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for ri, g in enumerate(rows):
            for ci, a in enumerate(cols):
                cat[ri, ci] = u[mono_mul(a, g)]
        kernel, rank = _kernel_basis(cat, p)
        hilbert.append(rank)
        # span of R_1 * Ann_{e-1} inside degree e
        span_rows: list = []
        span_piv: dict = {}
        if kernel_prev:
            prev_cols = monos[e - 1]
            for v in range(nv):
                if len(span_piv) == len(cols):
                    break
                shift = np.empty(len(prev_cols), dtype=np.int64)
                for ci, m in enumerate(prev_cols):
                    exps = list(m[1:])
                    exps[v] += 1
                    shift[ci] = index[(m[0] + 1,) + tuple(exps)]
                for kv in kernel_prev:
                    if len(span_piv) == len(cols):
                        break
                    row = np.zeros(len(cols), dtype=np.int64)
                    row[shift] = kv
                    _row_space_insert(span_rows, span_piv, row, p)
        for kv in kernel:
            if _row_space_insert(span_rows, span_piv, kv.copy(), p):
                generators.append(_vec_from_row(kv, cols))
        kernel_prev = kernel
    # degree d+1: everything annihilates; new generators complement R_1*Ann_d
    cols = monos[spec.d + 1]
    index = {m: i for i, m in enumerate(cols)}
    span_rows, span_piv = [], {}
    prev_cols = monos[spec.d]
    for v in range(nv):
        if len(span_piv) == len(cols):
            break
        shift = np.empty(len(prev_cols), dtype=np.int64)
        for ci, m in enumerate(prev_cols):
            exps = list(m[1:])
            exps[v] += 1
            shift[ci] = index[(m[0] + 1,) + tuple(exps)]
        for kv in kernel_prev:
            if len(span_piv) == len(cols):
                break
            row = np.zeros(len(cols), dtype=np.int64)
            row[shift] = kv
            _row_space_insert(span_rows, span_piv, row, p)
    for ci, m in enumerate(cols):
        if ci not in span_piv:
            row = np.zeros(len(cols), dtype=np.int64)
            row[ci] = 1
            if _row_space_insert(span_rows, span_piv, row, p):
                generators.append({(m, 0): 1})
    return AgrIdeal(spec, ring, generators, hilbert, forms, u)


def _vec_from_row(row: np.ndarray, monos: list) -> Vec:
    return {(monos[i], 0): int(row[i]) for i in np.nonzero(row)[0]}


def contract(g: Vec, u: dict, p: int, nvars: int, d: int,
             base: BaseOrdering) -> dict:
    """Contraction g o f of a homogeneous g of degree e against the form
    with divided-power coordinates u; maps degree-(d-e) monomials to
    coefficients.  Empty iff g annihilates f."""
    e = next(iter(g))[0][0]
    if e > d:
        return {}
    out: dict = {}
    for gamma in monomials_of_degree(nvars, d - e, base):
        total = 0
        for (alpha, _), c in g.items():
            total += c * u[mono_mul(alpha, gamma)]
        if total % p:
            out[gamma] = total % p
    return out


def gen_random_homogeneous(n_vars: int, degrees, p: int, seed: int,
                           names: Optional[tuple] = None):
    """Dense random forms of the given degrees: every monomial gets a
    uniform nonzero coefficient.  Deterministic per seed."""
    if not is_prime(p):
        raise DomainError("characteristic must be prime")
    ring = Ring(p, names or tuple(f"x{i}" for i in range(n_vars)))
    base = BaseOrdering("dp", n_vars)
    rng = random.Random(seed)
    out = []
    for d in degrees:
        poly: Vec = {}
        for m in monomials_of_degree(n_vars, d, base):
            poly[(m, 0)] = rng.randrange(1, p)
        out.append(poly)
    return ring, out
