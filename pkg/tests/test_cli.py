import json
import logging
import os

import pytest

from koszul_plane import cli
from koszul_plane.oracles import Prediction, PredictionReport
from koszul_plane.specfile import SpecError, fermat_spec, parse_spec

from conftest import P

QUARTIC_O2 = fermat_spec(4, P, {"L": 2})


def write(tmp_path, text, name="quartic.crv"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


# spec files

def test_parse_full_spec():
    spec = parse_spec("""
        # comment
        prime 2147483647
        degree 4
        4 0 0 1
        0 4 0 1
        0 0 4 1   # trailing comment
        bundle L twist 2
        minus scan 0 1
        bundle B twist 1
    """)
    assert spec.prime == P and spec.degree == 4 and len(spec.terms) == 3
    assert spec.bundles["L"].minus[0].scan_index == 0
    curve = spec.build_curve()
    assert spec.build_bundle(curve, "L").degree == 7
    assert spec.build_bundle(curve, "B").degree == 4


@pytest.mark.parametrize("text,line,fragment", [
    ("degree 4\n4 0 0 1\n3 0 0 1\n", 3, "sum to 3"),
    ("degree 4\n4 0 0 x\n", 2, "integers"),
    ("prime\ndegree 4\n", 1, "prime"),
    ("degree 4\n4 0 0 1\nminus 1 0 0 1\n", 3, "before any"),
    ("degree 4\n4 0 0 1\nbundle L twist\n", 3, "bundle"),
    ("degree 4\n4 0 0 1\nbundle L twist 1\nminus 1 0 0 0\n", 4, "positive"),
    ("degree 4\n4 0 0 1\nbundle L twist 1\nbundle L twist 2\n", 4, "twice"),
    ("4 0 0 1\ndegree 4\n", 1, "before"),
    ("degree 4\n4 0 0 1\nfoo bar\n", 3, "unrecognised"),
])
def test_spec_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(SpecError) as exc:
        parse_spec(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")
    assert fragment in str(exc.value)


def test_point_off_curve_reported_with_line():
    spec = parse_spec(QUARTIC_O2 + "point 1 1 1\n")
    with pytest.raises(SpecError, match="line 7"):
        spec.build_curve()


# command line

def test_curve_check_reports_certificate(tmp_path, capsys):
    code, out, _ = run(["curve-check", "--input", write(tmp_path, QUARTIC_O2)], capsys)
    res = json.loads(out)
    assert code == 0
    assert res["genus"] == 3 and res["certificate"]["smooth"]
    assert res["certificate"]["kind"] == "resultant"


def test_sections_table_output(tmp_path, capsys):
    code, out, _ = run(["sections", "--input", write(tmp_path, QUARTIC_O2), "--format", "csv",
                        "--very-ample", "2"], capsys)
    assert code == 0
    assert out.splitlines()[1].split(",")[3] == "6"


def test_verify_exit_zero_and_all_match(tmp_path, capsys):
    code, out, _ = run(["verify", "--input", write(tmp_path, QUARTIC_O2), "--prime", str(P)], capsys)
    res = json.loads(out)
    assert code == 0 and res["verdict"] == "match"
    assert all(r["verdict"] in ("match", "not-applicable") for r in res["reports"])


def test_verify_mismatch_gives_exit_two(tmp_path, capsys, monkeypatch):
    bad = Prediction("weight-zero", verdict="mismatch", mismatches=[{"p": 0, "q": 0, "computed": 2}])

    class FakeTable:
        prime = P
        cells = {}

    monkeypatch.setattr(cli, "run_verify", lambda *a, **k: PredictionReport("c", "B", "L", [bad], FakeTable()))
    code, _, _ = run(["verify", "--input", write(tmp_path, QUARTIC_O2), "--format", "table"], capsys)
    assert code == 2


def test_input_errors_exit_one(tmp_path, capsys):
    code, _, err = run(["betti", "--input", str(tmp_path / "missing.crv")], capsys)
    assert code == 1 and "cannot read" in err
    code, _, err = run(["betti", "--input", write(tmp_path, "degree 4\n4 0 0 1\n1 1 1\n", "bad.crv")], capsys)
    assert code == 1 and "line 3" in err
    singular = f"prime {P}\ndegree 4\n2 1 1 1\n1 2 1 1\n1 1 2 1\nbundle L twist 2\n"
    code, _, err = run(["betti", "--input", write(tmp_path, singular, "sing.crv")], capsys)
    assert code == 1 and "witness" in err
    code, _, err = run(["betti", "--input", write(tmp_path, fermat_spec(4, 10007, {"L": 2}), "small.crv")], capsys)
    assert code == 1 and "threshold" in err


def test_betti_high_weights_vanish(tmp_path, capsys):
    code, out, _ = run(["betti", "--input", write(tmp_path, QUARTIC_O2), "--qmax", "5"], capsys)
    res = json.loads(out)
    assert code == 0
    assert all(c["kappa"] == 0 for c in res["cells"] if c["q"] >= 3)
    assert {"dsquared", "hilbert", "riemann_roch", "duality", "two_prime"} <= set(res["checks"])
    assert res["checks"]["two_prime"]["passed"]


def test_betti_renderings(tmp_path, capsys):
    path = write(tmp_path, QUARTIC_O2)
    code, out, _ = run(["betti", "--input", path, "--format", "table", "--qmax", "2"], capsys)
    assert code == 0 and "check dsquared: pass" in out
    code, out, _ = run(["betti", "--input", path, "--format", "csv", "--qmax", "2"], capsys)
    assert out.startswith("p,q")


def test_cache_hit_is_byte_identical(tmp_path, capsys):
    path, cache = write(tmp_path, QUARTIC_O2), str(tmp_path / "cache")
    out1, out2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert cli.main(["betti", "--input", path, "--cache-dir", cache, "--out", out1]) == 0
    assert cli.main(["betti", "--input", path, "--cache-dir", cache, "--out", out2]) == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()
    m1 = json.load(open(out1 + ".manifest.json"))
    m2 = json.load(open(out2 + ".manifest.json"))
    assert (m1["cache"], m2["cache"]) == ("miss", "hit")
    assert m1["input_digest"] == m2["input_digest"]


def test_no_timing_output_reproducible_without_cache(tmp_path, capsys):
    path = write(tmp_path, QUARTIC_O2)
    _, a, _ = run(["betti", "--input", path, "--no-timing", "--qmax", "2"], capsys)
    _, b, _ = run(["betti", "--input", path, "--no-timing", "--qmax", "2"], capsys)
    assert a == b and "millis" not in a


def test_cache_key_follows_content_not_filename(tmp_path, capsys):
    cache = str(tmp_path / "cache")
    a = write(tmp_path, QUARTIC_O2, "a.crv")
    b = write(tmp_path, QUARTIC_O2, "b.crv")
    cli.main(["curve-check", "--input", a, "--cache-dir", cache, "--out", str(tmp_path / "1.json")])
    cli.main(["curve-check", "--input", b, "--cache-dir", cache, "--out", str(tmp_path / "2.json")])
    assert json.load(open(tmp_path / "2.json.manifest.json"))["cache"] == "hit"


def test_tampered_cache_entry_is_a_miss(tmp_path, capsys, caplog):
    path, cache = write(tmp_path, QUARTIC_O2), str(tmp_path / "cache")
    out = str(tmp_path / "r.json")
    args = ["curve-check", "--input", path, "--cache-dir", cache, "--out", out]
    assert cli.main(args) == 0
    original = open(out).read()
    entries = [f for f in os.listdir(cache) if f.endswith(".json") and not f.endswith(".manifest.json")]
    assert len(entries) == 1
    entry_path = os.path.join(cache, entries[0])
    env = json.load(open(entry_path))
    env["payload"] = env["payload"].replace('"genus": 3', '"genus": 4')
    json.dump(env, open(entry_path, "w"))
    with caplog.at_level(logging.WARNING, logger="koszul_plane"):
        assert cli.main(args) == 0
    assert "corrupt cache entry" in caplog.text
    assert open(out).read() == original
    assert json.load(open(out + ".manifest.json"))["cache"] == "miss"


def test_unwritable_cache_dir_degrades_with_warning(tmp_path, capsys, caplog):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with caplog.at_level(logging.WARNING, logger="koszul_plane"):
        code, out, _ = run(["curve-check", "--input", write(tmp_path, QUARTIC_O2),
                            "--cache-dir", str(blocker / "cache")], capsys)
    assert code == 0 and json.loads(out)["genus"] == 3
    assert "caching disabled" in caplog.text


def test_two_prime_with_explicit_second_prime(tmp_path, capsys):
    code, out, _ = run(["betti", "--input", write(tmp_path, fermat_spec(4, P, {"L": 2}) + "minus scan 0 1\n"),
                        "--second-prime", "2147483629", "--qmax", "2"], capsys)
    res = json.loads(out)
    assert code == 0
    assert res["checks"]["two_prime"]["second_prime"] == 2147483629
    assert res["checks"]["two_prime"]["passed"]
