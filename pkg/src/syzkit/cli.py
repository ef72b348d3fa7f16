"""Command-line front end and text formats.

Input grammar (line-oriented; '#' starts a comment):

    ring <p> <v1,v2,...> <dp|lp>
    <polynomial>
    <polynomial>
    ...

Polynomials are sums of signed terms; integer coefficients, '*' optional
between factors, '^' for powers: ``w*x+w*z+x^2+2*x*z-z^2`` and ``2xz`` both
parse.  Exit codes: 0 success, 1 usage error, 2 parse/math-domain error.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import (
    DomainError,
    OpCounters,
    Ring,
    Vec,
    is_prime,
    mono_deg,
    vec_component,
)
from .orderings import ORDER_KINDS, REORDER_MODES, BaseOrdering, OrderingChain
from .lift import LIFT_ALGORITHMS
from .resolution import (
    BettiTable,
    GradedFreeModule,
    Resolution,
    betti_minimal_from_nonminimal,
    betti_nonminimal,
    minimize,
    resolve,
)
from .examples_gen import AgrSpec, gen_agr


class ParseError(ValueError):
    """Input text error with position information."""

    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, column {col}: {msg}" if line else msg)
        self.line = line
        self.col = col


@dataclass
class InputDocument:
    ring: Ring
    ordering: BaseOrdering
    generators: list  # vectors with component 0

    @property
    def p(self):
        return self.ring.p

    @property
    def names(self):
        return self.ring.names


def _tokenizer(names: Sequence[str]):
    alts = sorted(names, key=len, reverse=True)
    pattern = "|".join(
        ["(?P<int>\\d+)",
         "(?P<var>" + "|".join(re.escape(n) for n in alts) + ")",
         "(?P<op>[\\^*+-])",
         "(?P<ws>\\s+)",
         "(?P<bad>.)"])
    return re.compile(pattern)


def parse_polynomial(text: str, ring: Ring, line: int = 0) -> Vec:
    """Parse one polynomial into a component-0 vector, coefficients mod p."""
    tok = _tokenizer(ring.names)
    var_index = {n: i for i, n in enumerate(ring.names)}
    terms: list = []  # (signed coefficient, exponent list)
    sign = 1
    coeff = None
    exps = None
    last_var = None
    expect_exponent = False

    def flush(col):
        nonlocal sign, coeff, exps, last_var
        if exps is None and coeff is None:
            raise ParseError("empty term", line, col)
        terms.append((sign * (1 if coeff is None else coeff),
                      exps or [0] * ring.nvars))
        sign, coeff, exps, last_var = 1, None, None, None

    col = 0
    for m in tok.finditer(text):
        col = m.start() + 1
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", line, col)
        if kind == "int":
            val = int(m.group())
            if expect_exponent:
                if last_var is None:
                    raise ParseError("exponent without a variable", line, col)
                exps[last_var] += val - 1  # the variable itself contributed 1
                expect_exponent = False
                last_var = None
            else:
                coeff = val if coeff is None else coeff * val
        elif kind == "var":
            if expect_exponent:
                raise ParseError("expected an exponent after '^'", line, col)
            if exps is None:
                exps = [0] * ring.nvars
            last_var = var_index[m.group()]
            exps[last_var] += 1
        else:  # operator
            op = m.group()
            if expect_exponent:
                raise ParseError("expected an exponent after '^'", line, col)
            if op == "^":
                if last_var is None:
                    raise ParseError("'^' without a variable", line, col)
                expect_exponent = True
            elif op == "*":
                if coeff is None and exps is None:
                    raise ParseError("'*' without a left factor", line, col)
            else:  # + or -
                if coeff is not None or exps is not None:
                    flush(col)
                if op == "-":
                    sign = -sign
    if expect_exponent:
        raise ParseError("dangling '^'", line, col)
    if coeff is not None or exps is not None:
        flush(col)
    if not terms:
        raise ParseError("empty polynomial", line, col)
    out: Vec = {}
    for c, e in terms:
        c %= ring.p
        if not c:
            continue
        mm = (ring.mono(e), 0)
        v = (out.get(mm, 0) + c) % ring.p
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def parse_input(text: str) -> InputDocument:
    """Parse a ring declaration plus one polynomial per line."""
    ring = None
    ordering = None
    gens = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ring is None:
            parts = line.split()
            if len(parts) != 4 or parts[0] != "ring":
                raise ParseError("expected 'ring <p> <vars> <dp|lp>'", ln, 1)
            try:
                p = int(parts[1])
            except ValueError:
                raise ParseError(f"invalid characteristic {parts[1]!r}", ln, 1)
            if not is_prime(p):
                raise ParseError(f"{p} is not prime", ln, 1)
            names = tuple(v.strip() for v in parts[2].split(",") if v.strip())
            if parts[3] not in ORDER_KINDS:
                raise ParseError(f"unknown ordering {parts[3]!r}", ln, 1)
            try:
                ring = Ring(p, names)
            except DomainError as e:
                raise ParseError(str(e), ln, 1)
            ordering = BaseOrdering(parts[3], len(names))
            continue
        vec = parse_polynomial(line, ring, ln)
        if vec:
            gens.append(vec)
    if ring is None:
        raise ParseError("missing ring declaration")
    return InputDocument(ring, ordering, gens)


# ---------------------------------------------------------------------------
# formatting


def _coeff_str(c: int, p: int) -> int:
    """Symmetric representative in (-p/2, p/2] for readable output."""
    return c - p if c > p // 2 else c


def mono_to_string(m, ring: Ring) -> str:
    if mono_deg(m) == 0:
        return "1"
    parts = []
    for name, e in zip(ring.names, m[1:]):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def poly_to_string(poly: dict, ring: Ring, base: BaseOrdering) -> str:
    """Canonical string: terms descending under the base ordering, symmetric
    coefficients."""
    if not poly:
        return "0"
    key = base.key_func()
    out = []
    for m in sorted(poly, key=key, reverse=True):
        c = _coeff_str(poly[m], ring.p)
        mono = mono_to_string(m, ring)
        mag = abs(c)
        if mono == "1":
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        out.append(("-" if c < 0 else "+") + body)
    s = "".join(out)
    return s[1:] if s.startswith("+") else s


def vector_to_string(vec: Vec, rank: int, ring: Ring, base: BaseOrdering) -> str:
    """Components as bracketed polynomial entries, gen(1)..gen(rank)."""
    parts = []
    for comp in range(rank):
        parts.append(poly_to_string(vec_component(vec, comp), ring, base))
    return "[" + ", ".join(parts) + "]"


def serialize_input(doc: InputDocument) -> str:
    lines = [f"ring {doc.p} {','.join(doc.names)} {doc.ordering.kind}"]
    for g in doc.generators:
        lines.append(poly_to_string(vec_component(g, 0), doc.ring, doc.ordering))
    return "\n".join(lines) + "\n"


def serialize_resolution(res: Resolution) -> str:
    """Stable plain-text form: ring header, module ranks/twists, one
    'row col polynomial' line per nonzero entry of each differential."""
    ring, base = res.ring, res.base
    lines = [f"resolution ring {ring.p} {','.join(ring.names)} {base.kind}"]
    lines.append(f"graded {'true' if res.graded else 'false'}")
    lines.append(f"minimal {'true' if res.minimal else 'false'}")
    for k, mod in enumerate(res.modules):
        tw = ",".join(str(t) for t in mod.twists) if mod.twists is not None else "-"
        lines.append(f"module {k} rank {mod.rank} twists {tw}")
    for k in range(1, res.length + 1):
        lines.append(f"differential {k}")
        for j, col in enumerate(res.diffs[k - 1]):
            for comp in range(res.modules[k - 1].rank):
                entry = vec_component(col, comp)
                if entry:
                    lines.append(f"{comp + 1} {j + 1} "
                                 + poly_to_string(entry, ring, base))
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_resolution(text: str) -> Resolution:
    """Read back :func:`serialize_resolution` output (stats are not part of
    the format and come back empty)."""
    lines = [ln.rstrip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("resolution ring "):
        raise ParseError("missing resolution header")
    _, _, p_s, names_s, kind = lines[0].split()
    ring = Ring(int(p_s), tuple(names_s.split(",")))
    base = BaseOrdering(kind, ring.nvars)
    graded = None
    minimal = False
    modules = []
    diffs: list = []
    cur: Optional[int] = None
    for ln, raw in enumerate(lines[1:], start=2):
        parts = raw.split()
        if parts[0] == "graded":
            graded = parts[1] == "true"
        elif parts[0] == "minimal":
            minimal = parts[1] == "true"
        elif parts[0] == "module":
            rank = int(parts[3])
            if len(parts) < 6:  # rank-0 module serialized with empty twists
                twists = () if graded else None
            elif parts[5] == "-":
                twists = None
            else:
                twists = tuple(int(t) for t in parts[5].split(","))
            modules.append(GradedFreeModule(rank, twists))
        elif parts[0] == "differential":
            cur = int(parts[1])
            diffs.append([dict() for _ in range(modules[cur].rank)])
        elif parts[0] == "end":
            break
        else:
            if cur is None:
                raise ParseError("entry before any differential", ln, 1)
            row, col = int(parts[0]) - 1, int(parts[1]) - 1
            poly = parse_polynomial(" ".join(parts[2:]), ring, ln)
            for (m, _), c in poly.items():
                diffs[cur - 1][col][(m, row)] = c
    res = Resolution(ring, base, OrderingChain(base), modules, diffs,
                     OpCounters(), bool(graded), minimal)
    return res


def betti_to_string(table: BettiTable, title: str) -> str:
    return f"{title}\n{table.format()}"


def stats_report(counters: OpCounters, res: Resolution,
                 verbose: bool = False, kv: bool = False) -> str:
    """Operation-count block, Q_sparse, and (verbose) a per-differential
    breakdown with generator counts, term counts and timings."""
    q = res.q_sparse()
    lines = [
        f"#Terms:   {counters.n_terms}",
        f"#Mult:    {counters.n_mult}",
        f"#Add:     {counters.n_add}",
        f"#Canc:    {counters.n_canc}",
        f"#MonCmp:  {counters.n_monomial_cmp}",
        f"Q_sparse: {q:.3f}" if q is not None else "Q_sparse: -",
    ]
    if verbose and res.length >= 2:
        lines.append("")
        lines.append(f"{'i':>4} {'#Generators':>12} {'#Terms':>10} "
                     f"{'Q_sparse':>10} {'time[s]':>9}")
        for k in range(2, res.length + 1):
            terms = res.term_count(k)
            qk = terms / res.entry_count(k)
            tk = res.level_times[k - 2] if k - 2 < len(res.level_times) else 0.0
            lines.append(f"{k:>4} {res.modules[k].rank:>12} {terms:>10} "
                         f"{qk:>10.3f} {tk:>9.3f}")
    if kv:
        lines.append("")
        for name, val in counters.as_dict().items():
            lines.append(f"stats.{name}={val}")
        lines.append(f"stats.q_sparse={q if q is not None else ''}")
    return "\n".join(lines) + "\n"


def emit_image(res: Resolution, k: int, path: str) -> None:
    """Binary PGM of phi_k: one pixel per entry; 255 = zero entry, 128 = one
    term, 0 = two or more terms."""
    rows = res.modules[k - 1].rank
    cols = res.modules[k].rank
    counts = [[0] * cols for _ in range(rows)]
    for j, col in enumerate(res.diffs[k - 1]):
        for (m, comp), _ in col.items():
            counts[comp][j] += 1
    data = bytearray()
    for i in range(rows):
        for j in range(cols):
            n = counts[i][j]
            data.append(255 if n == 0 else (128 if n == 1 else 0))
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
        fh.write(bytes(data))


# ---------------------------------------------------------------------------
# commands


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="syzkit",
                 description="Free resolutions over prime fields via "
                             "Schreyer-frame syzygy lifting.")
    sub = ap.add_subparsers(dest="command", required=True)

    rp = sub.add_parser("resolve", help="resolve an ideal from an input file")
    rp.add_argument("input", nargs="?", default="-",
                    help="input file ('-' for stdin)")
    rp.add_argument("--alg", default="tree", choices=LIFT_ALGORITHMS)
    rp.add_argument("--max-length", type=int, default=None)
    rp.add_argument("--reorder", default="negdegrevlex", choices=REORDER_MODES)
    rp.add_argument("--minimize", action="store_true",
                    help="minimize the resolution before output")
    rp.add_argument("--betti", choices=("min", "nonmin", "both"), default=None)
    rp.add_argument("--stats", action="store_true")
    rp.add_argument("--stats-kv", action="store_true",
                    help="append machine-readable key=value stats lines")
    rp.add_argument("--verbose", action="store_true")
    rp.add_argument("--image", metavar="PREFIX", default=None,
                    help="write one PGM per differential: PREFIX_phi<k>.pgm")
    rp.add_argument("--output", metavar="PATH", default=None,
                    help="write the serialized resolution to PATH")
    rp.add_argument("--print-resolution", action="store_true",
                    help="print the serialized resolution to stdout")
    rp.add_argument("--seed", type=int, default=None,
                    help="accepted for reproducibility bookkeeping; the "
                         "resolve pipeline is deterministic")
    rp.add_argument("--threads", type=int, default=1)

    gp = sub.add_parser("gen", help="generate benchmark ideals")
    gsub = gp.add_subparsers(dest="family", required=True)
    agr = gsub.add_parser("agr", help="apolar Artinian Gorenstein ideal")
    agr.add_argument("--n", type=int, required=True)
    agr.add_argument("--d", type=int, required=True)
    agr.add_argument("--s", type=int, required=True)
    agr.add_argument("--p", type=int, default=10007)
    agr.add_argument("--seed", type=int, default=0)
    agr.add_argument("-o", "--output", default=None)
    return ap


def cmd_resolve(args) -> int:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    doc = parse_input(text)
    counters = OpCounters()
    t0 = time.perf_counter()
    res = resolve(doc.generators, doc.ring, doc.ordering, alg=args.alg,
                  max_length=args.max_length, reorder=args.reorder,
                  threads=args.threads, counters=counters)
    elapsed = time.perf_counter() - t0
    shape = " <- ".join(f"F{k}(rank {m.rank})" for k, m in enumerate(res.modules))
    print(f"resolution length {res.length}: {shape}")
    print(f"minimal: {'yes' if res.minimal else 'no'}   "
          f"graded: {'yes' if res.graded else 'no'}   time: {elapsed:.3f}s")
    if args.betti:
        if not res.graded:
            raise DomainError("Betti tables require homogeneous input")
        if args.betti in ("nonmin", "both"):
            print(betti_to_string(betti_nonminimal(res), "Non-minimal Betti table:"))
        if args.betti in ("min", "both"):
            print(betti_to_string(betti_minimal_from_nonminimal(res),
                                  "Minimal Betti table:"))
    out_res = res
    if args.minimize:
        out_res = minimize(res)
        shape = " <- ".join(f"F{k}(rank {m.rank})"
                            for k, m in enumerate(out_res.modules))
        print(f"minimized: {shape}")
    if args.stats or args.stats_kv:
        print(stats_report(counters, res, verbose=args.verbose,
                           kv=args.stats_kv), end="")
    if args.image:
        for k in range(1, out_res.length + 1):
            emit_image(out_res, k, f"{args.image}_phi{k}.pgm")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(serialize_resolution(out_res))
    if args.print_resolution:
        print(serialize_resolution(out_res), end="")
    return 0


def cmd_gen(args) -> int:
    spec = AgrSpec(n=args.n, d=args.d, s=args.s, p=args.p, seed=args.seed)
    ideal = gen_agr(spec)
    base = BaseOrdering("dp", ideal.ring.nvars)
    doc = InputDocument(ideal.ring, base, ideal.generators)
    text = serialize_input(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
        if args.command == "resolve":
            return cmd_resolve(args)
        if args.command == "gen":
            return cmd_gen(args)
        return 1
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except (ParseError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
