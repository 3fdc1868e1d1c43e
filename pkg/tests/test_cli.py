import csv
import glob
import json
import os
from pathlib import Path

import pytest

from conftest import brute_pair
from hopcroft import cli
from hopcroft import generators as gen
from hopcroft.counting import CountResult
from hopcroft.instances import ParseError, parse_lines, parse_points, read_instance

BUNDLED = Path(__file__).resolve().parent.parent / "instances"


def run(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


def report(args, capsys):
    code, out, err = run(args, capsys)
    assert code == 0, err
    return json.loads(out)


def test_generate_is_deterministic(tmp_path, capsys):
    for tag in ("a", "b"):
        assert cli.main(["generate", "grid", "-p", "k=10", "--seed", "7", "--out", str(tmp_path / tag)]) == 0
    for suffix in ("points", "lines"):
        assert (tmp_path / f"a.{suffix}").read_bytes() == (tmp_path / f"b.{suffix}").read_bytes()


def test_generate_rejects_bad_params(tmp_path, capsys):
    assert run(["generate", "grid", "-p", "k=0", "--out", str(tmp_path / "g")], capsys)[0] == 2
    assert run(["generate", "uniform", "-p", "q=3", "--out", str(tmp_path / "g")], capsys)[0] == 2
    assert run(["generate", "uniform", "-p", "m", "--out", str(tmp_path / "g")], capsys)[0] == 2


def test_uniform_respects_bounds():
    P, L = gen.uniform(2000, 2000, 3)
    assert all(abs(x) <= gen.SLOPE and abs(y) <= gen.COORD and w == 1 for x, y, w in P)
    assert all(abs(a) <= gen.SLOPE and abs(b) <= gen.COORD and d == 1 for a, b, d in L)


def test_grid_incidences_match_oracle(tmp_path, capsys):
    cli.main(["generate", "grid", "-p", "k=6", "--out", str(tmp_path / "g")])
    capsys.readouterr()
    rep = report(["run", "count", "--algo", "cascade", "--points", str(tmp_path / "g.points"),
                  "--lines", str(tmp_path / "g.lines"), "--check"], capsys)
    P, L = gen.grid(6)
    assert rep["result"]["incidences"] == brute_pair(P, L)[1] == 6 ** 4
    assert rep["check"]["passed"]


@pytest.mark.parametrize("name", ["uniform", "grid", "degenerate", "clustered", "rational"])
@pytest.mark.parametrize("algo", ["cascade", "recursive", "arrangement", "asymmetric", "weighted"])
def test_bundled_count_instances_pass_check(name, algo, capsys):
    rep = report(["run", "count", "--algo", algo, "--points", str(BUNDLED / f"{name}.points"),
                  "--lines", str(BUNDLED / f"{name}.lines"), "--check"], capsys)
    assert rep["check"]["passed"] is True
    assert rep["schema"] == cli.SCHEMA


@pytest.mark.parametrize("name", ["segments", "segments-shared"])
@pytest.mark.parametrize("algo", ["seg-count", "seg-components"])
def test_bundled_segments_pass_check(name, algo, capsys):
    rep = report(["run", "segments", "--algo", algo, "--segments", str(BUNDLED / f"{name}.segments"), "--check"],
                 capsys)
    assert rep["check"]["passed"] is True


def test_bundled_distance_pass_check(capsys):
    f = str(BUNDLED / "bichromatic.bichromatic")
    rep = report(["run", "distance", "--algo", "dist-count", "--bichromatic", f, "--radius", "2", "--check"], capsys)
    assert rep["check"]["passed"] is True
    rep = report(["run", "distance", "--algo", "dist-select", "--bichromatic", f, "--k", "1000", "--check"], capsys)
    assert rep["check"]["passed"] is True


def test_dectree_runs(capsys):
    for algo in ("dectree-sort-tree", "dectree-sort-quantile", "dectree-vertices"):
        rep = report(["run", "dectree", "--algo", algo, "--n", "3", "--check"], capsys)
        assert rep["check"]["passed"] and rep["comparisons"] > 0


def test_empty_instance_gives_zeros(tmp_path, capsys):
    (tmp_path / "e.points").write_text("# nothing\n")
    (tmp_path / "e.lines").write_text("")
    rep = report(["run", "count", "--algo", "brute", "--points", str(tmp_path / "e.points"),
                  "--lines", str(tmp_path / "e.lines")], capsys)
    assert rep["result"] == {"above": 0, "incidences": 0}
    assert rep["predicates"] == 0


def test_report_fields_and_reproducibility(capsys):
    args = ["run", "count", "--algo", "cascade", "--points", str(BUNDLED / "uniform.points"),
            "--lines", str(BUNDLED / "uniform.lines"), "--seed", "5"]
    a, b = report(args, capsys), report(args, capsys)
    for k in ("schema", "version", "algorithm", "instance", "result", "predicates", "comparisons",
              "wall_seconds", "seed", "check"):
        assert k in a
    a.pop("wall_seconds"), b.pop("wall_seconds")
    assert a == b
    assert a["instance"]["generator"] == "uniform" and a["seed"] == 5


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv(cli.SEED_ENV, "17")
    rep = report(["run", "count", "--algo", "recursive", "--points", str(BUNDLED / "grid.points"),
                  "--lines", str(BUNDLED / "grid.lines")], capsys)
    assert rep["seed"] == 17


def test_csv_output(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert cli.main(["run", "count", "--algo", "brute", "--points", str(BUNDLED / "grid.points"),
                     "--lines", str(BUNDLED / "grid.lines"), "--format", "csv", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 1 and rows[0]["result.incidences"] == str(5 ** 4)


def test_malformed_file_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.points"
    bad.write_text("1 2\n3   oops\n")
    code, out, err = run(["run", "count", "--algo", "brute", "--points", str(bad),
                          "--lines", str(BUNDLED / "grid.lines")], capsys)
    assert code == 2
    assert f"{bad}:2:5:" in err


def test_vertical_line_rejected(tmp_path, capsys):
    bad = tmp_path / "v.lines"
    bad.write_text("1 2 1\n1 5 0\n")
    code, out, err = run(["run", "count", "--algo", "cascade", "--points", str(BUNDLED / "grid.points"),
                          "--lines", str(bad)], capsys)
    assert code == 2 and "vertical" in err and ":2:5:" in err


def test_parsers():
    assert parse_points("1/2 3\n# c\n\n4 5 # tail\n") == [(1, 6, 2), (4, 5, 1)]
    assert parse_lines("2 4 2\n-1/3 1\n") == [(1, 2, 1), (-1, 3, 3)]
    with pytest.raises(ParseError):
        parse_points("1 2 3\n")
    with pytest.raises(ParseError):
        parse_lines("1\n")


def test_check_failure_persists_counterexample(tmp_path, monkeypatch, capsys):
    monkeypatch.setitem(cli.COUNT_ALGOS, "cascade", lambda P, L, s: CountResult(above=-1))
    out = tmp_path / "rep.json"
    code, _, err = run(["run", "count", "--algo", "cascade", "--points", str(BUNDLED / "grid.points"),
                        "--lines", str(BUNDLED / "grid.lines"), "--check", "--out", str(out)], capsys)
    assert code == 1 and "check failed" in err
    rep = json.loads(out.read_text())
    assert rep["check"]["passed"] is False
    files = rep["counterexample"]
    assert all(os.path.exists(f) for f in files)
    inst = read_instance(points=files[0], lines=files[1])
    assert len(inst.payload["points"]) == 250 and inst.generator == "grid"


def test_fit_slope_exact():
    xs = [1, 2, 3, 4]
    fit = cli.fit_slope(xs, [2 * x + 1 for x in xs])
    assert abs(fit["slope"] - 2) < 1e-12 and abs(fit["intercept"] - 1) < 1e-12
    assert fit["ci"][0] <= 2 <= fit["ci"][1]


def test_bench_brute_and_determinism(capsys):
    a = cli.bench("brute", [64, 128, 256], 2, 0)
    assert abs(a["fit"]["slope"] - 2) < 1e-9
    b = cli.bench("cascade", [64, 128, 256], 2, 0)
    c = cli.bench("cascade", [64, 128, 256], 2, 0)
    assert [r["predicates"] for r in b["runs"]] == [r["predicates"] for r in c["runs"]]
    with pytest.raises(ValueError):
        cli.bench("brute", [64, 128], 1, 0)
    code, out, _ = run(["bench", "--algo", "brute", "--sizes", "32,64,128", "--reps", "1", "--format", "csv"], capsys)
    assert code == 0 and "# slope=2.0000" in out


def test_wrong_algo_for_command(capsys):
    code, _, err = run(["run", "segments", "--algo", "cascade", "--segments", str(BUNDLED / "segments.segments")],
                       capsys)
    assert code == 2 and "does not apply" in err
