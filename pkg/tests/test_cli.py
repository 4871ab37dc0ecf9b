import json

import pytest
from click.testing import CliRunner

from gconv import (
    ConvRequest,
    CountingMeasure,
    Dihedral,
    Integers,
    Lattice,
    Mul,
    convolve,
    delta,
    dumps_csv,
    max_deviation,
    read_csv,
)
from gconv import SampledFunction
from gconv.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def write(path, text):
    path.write_text(text)
    return str(path)


def csv_of(fn):
    return dumps_csv(fn)


A_CSV = "# group=Z vdim=1\n0,1\n1,2\n"
B_CSV = "# group=Z vdim=1\n0,3\n1,4\n"


def test_version(runner):
    res = runner.invoke(main, ["--version"])
    assert res.exit_code == 0
    assert "gconv" in res.output


def test_conv_fixture(runner, tmp_path):
    a = write(tmp_path / "a.csv", A_CSV)
    b = write(tmp_path / "b.csv", B_CSV)
    out = tmp_path / "out.csv"
    res = runner.invoke(main, ["conv", "--group", "Z", "--pairing", "mul", a, b, "-o", str(out)])
    assert res.exit_code == 0, res.output + res.stderr
    assert out.read_text() == "# group=Z vdim=1\n0,3\n1,10\n2,8\n"


def test_conv_empty_input(runner, tmp_path):
    a = write(tmp_path / "a.csv", "# group=Z vdim=1\n")
    b = write(tmp_path / "b.csv", B_CSV)
    out = tmp_path / "out.csv"
    res = runner.invoke(main, ["conv", a, b, "-o", str(out)])
    assert res.exit_code == 0
    assert out.read_text() == "# group=Z vdim=1\n"


def test_conv_vdim_mismatch_exits_3(runner, tmp_path):
    a = write(tmp_path / "a.csv", A_CSV)
    b = write(tmp_path / "b.csv", "# group=Z vdim=2\n0,3,4\n")
    res = runner.invoke(main, ["conv", a, b, "-o", str(tmp_path / "out.csv")])
    assert res.exit_code == 3
    assert "error:" in res.stderr


def test_conv_carrier_mismatch_exits_3(runner, tmp_path):
    a = write(tmp_path / "a.csv", A_CSV)
    b = write(tmp_path / "b.csv", "# group=Zn:8 vdim=1\n0,3\n")
    res = runner.invoke(main, ["conv", a, b, "-o", str(tmp_path / "out.csv")])
    assert res.exit_code == 3
    assert "different carriers" in res.stderr


def test_conv_bad_csv_exits_2_with_line_number(runner, tmp_path):
    a = write(tmp_path / "a.csv", "# group=Z vdim=1\n0,1\nbogus\n")
    b = write(tmp_path / "b.csv", B_CSV)
    res = runner.invoke(main, ["conv", a, b, "-o", str(tmp_path / "out.csv")])
    assert res.exit_code == 2
    assert "line 3" in res.stderr


def test_conv_group_flag_mismatch_exits_2(runner, tmp_path):
    a = write(tmp_path / "a.csv", A_CSV)
    b = write(tmp_path / "b.csv", B_CSV)
    res = runner.invoke(main, ["conv", "--group", "Zn:8", a, b, "-o", str(tmp_path / "out.csv")])
    assert res.exit_code == 2
    assert "--group" in res.stderr


def test_conv_bad_pairing_token_exits_2(runner, tmp_path):
    a = write(tmp_path / "a.csv", A_CSV)
    b = write(tmp_path / "b.csv", B_CSV)
    res = runner.invoke(main, ["conv", "--pairing", "cross", a, b, "-o", str(tmp_path / "out.csv")])
    assert res.exit_code == 2
    assert "pairing" in res.stderr


def test_conv_smul_vector_payload(runner, tmp_path):
    a = write(tmp_path / "a.csv", A_CSV)
    b = write(tmp_path / "b.csv", "# group=Z vdim=2\n0,3,-1\n1,4,0.5\n")
    out = tmp_path / "out.csv"
    res = runner.invoke(main, ["conv", "--pairing", "smul:2", a, b, "-o", str(out)])
    assert res.exit_code == 0
    got = read_csv(str(out))
    assert got.vdim == 2
    assert got.eval((1,))[0] == 10.0 and got.eval((1,))[1] == -1.5


def test_conv_fast_matches_sparse(runner, tmp_path, rng):
    rows = "\n".join("%d,%s" % (i, v) for i, v in enumerate(rng.uniform(-1, 1, 64)))
    a = write(tmp_path / "a.csv", "# group=Z vdim=1\n" + rows + "\n")
    b = write(tmp_path / "b.csv", "# group=Z vdim=1\n" + rows + "\n")
    out_plain, out_fast = tmp_path / "p.csv", tmp_path / "f.csv"
    assert runner.invoke(main, ["conv", a, b, "-o", str(out_plain)]).exit_code == 0
    assert runner.invoke(main, ["conv", "--fast", a, b, "-o", str(out_fast)]).exit_code == 0
    plain = read_csv(str(out_plain))
    fast = read_csv(str(out_fast))
    sup = max(abs(plain.eval(p)[0]) for p in plain.support())
    assert max_deviation(fast, plain) <= 1e-9 * (1 + sup)


def test_conv_alt_variant_on_d4(runner, tmp_path):
    d4 = Dihedral(4)
    a = write(tmp_path / "a.csv", csv_of(delta(d4, (1, 0))))
    b = write(tmp_path / "b.csv", csv_of(delta(d4, (0, 1))))
    out_std, out_alt = tmp_path / "s.csv", tmp_path / "t.csv"
    assert runner.invoke(main, ["conv", a, b, "-o", str(out_std)]).exit_code == 0
    assert runner.invoke(main, ["conv", "--variant", "alt", a, b, "-o", str(out_alt)]).exit_code == 0
    assert read_csv(str(out_std)).support() == [(3, 1)]
    assert read_csv(str(out_alt)).support() == [(1, 1)]


def test_conv_missing_input_exits_2(runner, tmp_path):
    b = write(tmp_path / "b.csv", B_CSV)
    res = runner.invoke(main, ["conv", str(tmp_path / "nope.csv"), b, "-o", str(tmp_path / "o.csv")])
    assert res.exit_code == 2


def _lattice_csv(fn, lo, hi, h=0.01, token="lattice:1:0.01"):
    lines = ["# group=%s vdim=1" % token]
    for i in range(lo, hi + 1):
        lines.append("%d,%s" % (i, repr(fn(i * h))))
    return "\n".join(lines) + "\n"


def test_mollify_radius_guard_exits_4(runner, tmp_path):
    a = write(tmp_path / "a.csv", _lattice_csv(abs, -30, 30))
    res = runner.invoke(main, ["mollify", a, "-R", "0.01", "-o", str(tmp_path / "o.csv")])
    assert res.exit_code == 4
    assert "below 10h" in res.stderr
    res = runner.invoke(main, ["mollify", a, "--study", "0.4,0.05", "-o", str(tmp_path / "o.csv")])
    assert res.exit_code == 4


def test_mollify_constant_round_trip(runner, tmp_path):
    a = write(tmp_path / "a.csv", _lattice_csv(lambda x: 2.0, -100, 100))
    out = tmp_path / "o.csv"
    res = runner.invoke(main, ["mollify", a, "-R", "0.25", "-o", str(out)])
    assert res.exit_code == 0
    got = read_csv(str(out))
    for i in range(-70, 71):
        assert abs(got.eval((i,))[0] - 2.0) <= 1e-10


def test_mollify_study_report(runner, tmp_path):
    a = write(tmp_path / "a.csv", _lattice_csv(abs, -60, 60))
    out = tmp_path / "report.csv"
    res = runner.invoke(main, ["mollify", a, "--study", "0.4,0.2,0.1", "-o", str(out)])
    assert res.exit_code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "radius,distance,bound,slack,passed"
    assert len(lines) == 4
    prev = float("inf")
    for line in lines[1:]:
        radius, distance, bound, slack, passed = line.split(",")
        assert passed == "pass"
        assert float(distance) <= float(bound) + float(slack)
        assert float(distance) < prev
        prev = float(distance)


def test_mollify_study_json(runner, tmp_path):
    a = write(tmp_path / "a.csv", _lattice_csv(abs, -60, 60))
    res = runner.invoke(main, ["mollify", a, "--study", "0.4,0.2", "--format", "json", "-o", str(tmp_path / "r.json")])
    assert res.exit_code == 0
    rows = json.loads((tmp_path / "r.json").read_text())
    assert len(rows) == 2 and rows[0]["passed"] is True


def test_mollify_rejects_non_lattice(runner, tmp_path):
    a = write(tmp_path / "a.csv", A_CSV)
    res = runner.invoke(main, ["mollify", a, "-R", "0.25", "-o", str(tmp_path / "o.csv")])
    assert res.exit_code == 3
    assert "lattice" in res.stderr


def test_mollify_requires_radius_or_study(runner, tmp_path):
    a = write(tmp_path / "a.csv", _lattice_csv(abs, -30, 30))
    res = runner.invoke(main, ["mollify", a, "-o", str(tmp_path / "o.csv")])
    assert res.exit_code == 2
    res = runner.invoke(main, ["mollify", a, "--study", "x,y", "-o", str(tmp_path / "o.csv")])
    assert res.exit_code == 2


def test_laws_all_pass_on_abelian(runner, tmp_path):
    a = write(tmp_path / "a.csv", A_CSV)
    b = write(tmp_path / "b.csv", B_CSV)
    res = runner.invoke(main, ["laws", a, b])
    assert res.exit_code == 0, res.stderr
    lines = res.output.strip().splitlines()
    assert lines[0] == "check,status,deviation"
    checks = {ln.split(",")[0]: ln.split(",")[1] for ln in lines[1:]}
    assert checks == {
        "scalar": "pass",
        "additivity": "pass",
        "commutativity": "pass",
        "integral-identity": "pass",
        "fubini": "pass",
    }


def test_laws_single_input(runner, tmp_path):
    a = write(tmp_path / "a.csv", A_CSV)
    res = runner.invoke(main, ["laws", a])
    assert res.exit_code == 0


def test_laws_d4_counterexample(runner, tmp_path):
    d4 = Dihedral(4)
    a = write(tmp_path / "a.csv", csv_of(delta(d4, (1, 0))))
    b = write(tmp_path / "b.csv", csv_of(delta(d4, (0, 1))))
    res = runner.invoke(main, ["laws", a, b])
    assert res.exit_code == 0, res.stderr
    assert "counterexample exhibited" in res.output


def test_laws_verify_pass_and_fail(runner, tmp_path):
    f = read_csv(write(tmp_path / "a.csv", A_CSV))
    g = read_csv(write(tmp_path / "b.csv", B_CSV))
    good = convolve(ConvRequest(f, g, Mul(), CountingMeasure(Integers())))
    v_good = write(tmp_path / "good.csv", csv_of(good))
    res = runner.invoke(
        main, ["laws", str(tmp_path / "a.csv"), str(tmp_path / "b.csv"), "--verify", v_good]
    )
    assert res.exit_code == 0
    assert "verify,pass" in res.output
    bad = SampledFunction.from_scalar(Integers(), {(0,): 3.0, (1,): 10.5, (2,): 8.0})
    v_bad = write(tmp_path / "bad.csv", csv_of(bad))
    res = runner.invoke(
        main, ["laws", str(tmp_path / "a.csv"), str(tmp_path / "b.csv"), "--verify", v_bad]
    )
    assert res.exit_code == 1
    assert "verify,fail" in res.output
    assert "failed checks: verify" in res.stderr
    assert "worst point" in res.stderr


def test_laws_validation(runner, tmp_path):
    a = write(tmp_path / "a.csv", A_CSV)
    res = runner.invoke(main, ["laws", a, a, a])
    assert res.exit_code == 2
    res = runner.invoke(main, ["laws", a, "--tol", "-1"])
    assert res.exit_code == 2


def test_laws_json_output(runner, tmp_path):
    a = write(tmp_path / "a.csv", A_CSV)
    b = write(tmp_path / "b.csv", B_CSV)
    res = runner.invoke(main, ["laws", "--format", "json", a, b])
    assert res.exit_code == 0
    rows = json.loads(res.output)
    assert all(r["status"] == "pass" for r in rows)


def step_csv(h, token):
    lines = ["# group=%s vdim=1" % token]
    n = int(round(1.0 / h))
    for i in range(0, n + 1):
        lines.append("%d,1" % i)
    return "\n".join(lines) + "\n"


def test_deriv_check_reports_honest_failure(runner, tmp_path):
    # indicator of [0,1] at h=0.02 with the default bump: the first-order
    # deviation lands near 9.0e-3, above the default 5e-3 tolerance
    a = write(tmp_path / "a.csv", step_csv(0.02, "lattice:1:0.02"))
    res = runner.invoke(main, ["deriv-check", a])
    assert res.exit_code == 1
    assert "max deviation" in res.stderr
    lines = res.output.strip().splitlines()
    assert lines[0] == "order,deviation,tol,passed"
    rows = [ln.split(",") for ln in lines[1:]]
    assert rows[0][3] == "pass"
    assert rows[1][3] == "fail"
    assert abs(float(rows[1][1]) - 0.00904514111108) <= 1e-12


def test_deriv_check_passes_with_looser_tol(runner, tmp_path):
    a = write(tmp_path / "a.csv", step_csv(0.02, "lattice:1:0.02"))
    res = runner.invoke(main, ["deriv-check", "--tol", "0.01", a])
    assert res.exit_code == 0, res.stderr


def test_deriv_check_order_two(runner, tmp_path):
    a = write(tmp_path / "a.csv", step_csv(0.02, "lattice:1:0.02"))
    res = runner.invoke(main, ["deriv-check", "--order", "2", "--tol", "1.0", a])
    assert res.exit_code == 0, res.stderr
    lines = res.output.strip().splitlines()
    assert len(lines) == 4  # header + orders 0..2


def test_deriv_check_rejects_order_three(runner, tmp_path):
    a = write(tmp_path / "a.csv", step_csv(0.02, "lattice:1:0.02"))
    res = runner.invoke(main, ["deriv-check", "--order", "3", a])
    assert res.exit_code == 2
    assert "order" in res.stderr


def test_deriv_check_rejects_tiny_radius(runner, tmp_path):
    a = write(tmp_path / "a.csv", step_csv(0.02, "lattice:1:0.02"))
    res = runner.invoke(main, ["deriv-check", "-R", "0.1", a])
    assert res.exit_code == 2


def test_deriv_check_needs_lattice(runner, tmp_path):
    a = write(tmp_path / "a.csv", A_CSV)
    res = runner.invoke(main, ["deriv-check", a])
    assert res.exit_code == 2
    assert "lattice" in res.stderr


def test_bench_smoke(runner):
    res = runner.invoke(main, ["bench", "64", "--trials", "1"])
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[0] == "size,naive_time,fast_time,max_deviation"
    size, tn, tf, dev = lines[1].split(",")
    assert size == "64"
    assert float(tn) > 0 and float(tf) > 0
    assert float(dev) <= 1e-9


def test_bench_json(runner):
    res = runner.invoke(main, ["bench", "64,128", "--trials", "1", "--format", "json"])
    assert res.exit_code == 0
    rows = json.loads(res.output)
    assert [r["size"] for r in rows] == [64, 128]


def test_bench_validation(runner):
    assert runner.invoke(main, ["bench", "32"]).exit_code == 2
    assert runner.invoke(main, ["bench", "abc"]).exit_code == 2
    assert runner.invoke(main, ["bench", ""]).exit_code == 2
