import pytest

from syzkit.algebra import Ring
from syzkit.cli import (
    ParseError,
    emit_image,
    main,
    parse_input,
    parse_polynomial,
    parse_resolution,
    poly_to_string,
    serialize_input,
    serialize_resolution,
    stats_report,
)
from syzkit.algebra import OpCounters, vec_component
from syzkit.resolution import resolve

SEC5 = """ring 32003 w,x,y,z lp
w*x+w*z+x^2+2*x*z-z^2
w*y-w*z-x*z-y*z-2*z^2
x*y+z^2
"""


def test_parse_input_sec5(sec5):
    doc = parse_input(SEC5)
    assert doc.p == 32003 and doc.names == ("w", "x", "y", "z")
    assert doc.ordering.kind == "lp"
    assert doc.generators == sec5.gens


def test_parse_errors():
    with pytest.raises(ParseError, match="not prime"):
        parse_input("ring 4 x dp\nx\n")
    with pytest.raises(ParseError, match="unknown ordering"):
        parse_input("ring 7 x up\nx\n")
    with pytest.raises(ParseError):
        parse_input("x+y\n")  # missing ring line
    ring = Ring(7, ("x", "y"))
    with pytest.raises(ParseError, match="unexpected character"):
        parse_polynomial("x + q", ring)
    with pytest.raises(ParseError, match="dangling"):
        parse_polynomial("x^", ring)
    with pytest.raises(ParseError):
        parse_polynomial("", ring)


def test_parse_coefficient_reduction():
    doc = parse_input("ring 7 x,y dp\nx^2 - 3y^2\n")
    ring = doc.ring
    assert doc.generators[0] == {(ring.mono([2, 0]), 0): 1,
                                 (ring.mono([0, 2]), 0): 4}


def test_parse_implicit_star():
    ring = Ring(32003, ("x", "z"))
    assert parse_polynomial("2xz", ring) == parse_polynomial("2*x*z", ring)
    assert parse_polynomial("x x", ring) == parse_polynomial("x^2", ring)


def test_poly_roundtrip(sec5):
    for g in sec5.gens:
        s = poly_to_string(vec_component(g, 0), sec5.ring, sec5.base)
        assert parse_polynomial(s, sec5.ring) == g
    assert poly_to_string({}, sec5.ring, sec5.base) == "0"


def test_input_document_roundtrip(sec5):
    doc = parse_input(SEC5)
    text = serialize_input(doc)
    doc2 = parse_input(text)
    assert serialize_input(doc2) == text
    assert doc2.generators == doc.generators


def test_resolution_roundtrip(sec5):
    res = resolve(sec5.gens, sec5.ring, sec5.base)
    text = serialize_resolution(res)
    res2 = parse_resolution(text)
    assert serialize_resolution(res2) == text
    assert res2.diffs == res.diffs
    assert [m.rank for m in res2.modules] == [1, 3, 2]


def test_resolution_roundtrip_ungraded():
    doc = parse_input("ring 7 x,y lp\nx^2+y\nx*y^2+x\n")
    res = resolve(doc.generators, doc.ring, doc.ordering)
    assert not res.graded
    text = serialize_resolution(res)
    res2 = parse_resolution(text)
    assert serialize_resolution(res2) == text
    assert res2.diffs == res.diffs


def test_main_print_resolution(tmp_path, capsys):
    inp = tmp_path / "in.txt"
    inp.write_text(SEC5)
    assert main(["resolve", str(inp), "--print-resolution"]) == 0
    out = capsys.readouterr().out
    assert "resolution ring 32003 w,x,y,z lp" in out
    assert out.rstrip().endswith("end")


def test_emit_image_sec5(sec5, tmp_path):
    res = resolve(sec5.gens, sec5.ring, sec5.base)
    path = tmp_path / "phi2.pgm"
    emit_image(res, 2, str(path))
    data = path.read_bytes()
    assert data == b"P5\n2 3\n255\n" + bytes([0, 128, 0, 128, 0, 0])
    path1 = tmp_path / "phi1.pgm"
    emit_image(res, 1, str(path1))
    header = path1.read_bytes().split(b"\n", 3)
    assert header[1] == b"3 1"


def test_stats_report(sec5):
    ctr = OpCounters()
    res = resolve(sec5.gens, sec5.ring, sec5.base, counters=ctr)
    text = stats_report(ctr, res)
    assert "#Terms:   11" in text
    assert "Q_sparse: 1.833" in text
    kv = stats_report(ctr, res, kv=True)
    assert "stats.n_terms=11" in kv
    empty = resolve([], sec5.ring, sec5.base, counters=OpCounters())
    assert "Q_sparse: -" in stats_report(OpCounters(), empty)


def test_main_resolve(tmp_path, capsys):
    inp = tmp_path / "in.txt"
    inp.write_text(SEC5)
    out = tmp_path / "res.txt"
    code = main(["resolve", str(inp), "--betti", "both", "--stats",
                 "--output", str(out), "--image", str(tmp_path / "img")])
    assert code == 0
    printed = capsys.readouterr().out
    assert "resolution length 2" in printed
    assert "minimal: yes" in printed
    assert (tmp_path / "img_phi2.pgm").exists()
    assert out.read_text().startswith("resolution ring 32003")


def test_main_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("ring 4 x dp\nx\n")
    assert main(["resolve", str(bad)]) == 2
    inhom = tmp_path / "inhom.txt"
    inhom.write_text("ring 7 x,y dp\nx^2+y\n")
    assert main(["resolve", str(inhom), "--betti", "min"]) == 2
    assert main(["resolve", str(tmp_path / "missing.txt")]) == 2
    assert main(["bogus-command"]) == 1
    capsys.readouterr()


def test_main_gen_resolve_pipeline(tmp_path, capsys):
    ideal_file = tmp_path / "agr.txt"
    assert main(["gen", "agr", "--n", "2", "--d", "2", "--s", "2",
                 "--p", "10007", "--seed", "3", "-o", str(ideal_file)]) == 0
    assert ideal_file.read_text().startswith("ring 10007 x0,x1,x2 dp")
    assert main(["resolve", str(ideal_file), "--betti", "min",
                 "--minimize"]) == 0
    printed = capsys.readouterr().out
    assert "Minimal Betti table:" in printed


def test_main_determinism(tmp_path, capsys):
    inp = tmp_path / "in.txt"
    inp.write_text(SEC5)

    def run(tag, threads):
        out = tmp_path / f"res_{tag}.txt"
        img = tmp_path / f"img_{tag}"
        code = main(["resolve", str(inp), "--alg", "tree", "--betti", "both",
                     "--threads", str(threads),
                     "--output", str(out), "--image", str(img)])
        assert code == 0
        stdout = capsys.readouterr().out
        # timing lines vary run to run; compare everything else
        stable = "\n".join(ln for ln in stdout.splitlines()
                           if not ln.startswith("minimal:"))
        return stable, out.read_text(), (tmp_path / f"img_{tag}_phi2.pgm").read_bytes()

    a = run("a", 1)
    b = run("b", 1)
    assert a == b
    c = run("c", 3)
    assert c[1] == a[1] and c[2] == a[2]  # same resolution and images
