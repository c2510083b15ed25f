"""Tests for the command line front end and its file formats."""

import json
import math

import numpy as np
import pytest

from gaussian_rdp import PerceptionMetric
from gaussian_rdp.cli import (
    CliInputError,
    GridSpec,
    RunConfig,
    curve_from_csv,
    curve_to_csv,
    load_covariance_file,
    main,
    parse_budget,
    run_curve,
    run_point,
    run_verify,
)


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_parse_budget_scalar_and_inf():
    assert parse_budget("0.5", "x") == 0.5
    assert parse_budget("1e9", "x") == 1e9
    assert parse_budget("inf", "x") == math.inf


def test_parse_budget_grids():
    g = parse_budget("1:10:4", "x")
    assert g == GridSpec(1.0, 10.0, 4)
    assert parse_budget("0.1:1:3:log", "x") == GridSpec(0.1, 1.0, 3, "log")


def test_parse_budget_errors():
    with pytest.raises(CliInputError):
        parse_budget("1:2", "x")
    with pytest.raises(CliInputError):
        parse_budget("1:2:zero", "x")
    with pytest.raises(CliInputError):
        parse_budget("2:1:5", "x")
    with pytest.raises(CliInputError):
        parse_budget("0:1:5:log", "x")
    with pytest.raises(CliInputError):
        parse_budget("1:2:3:cubic", "x")
    with pytest.raises(CliInputError):
        parse_budget("1:2:0", "x")


def test_gridspec_values():
    assert GridSpec(2.0, 2.0, 1).values() == (2.0,)
    v = GridSpec(1.0, 3.0, 3).values()
    assert v == (1.0, 2.0, 3.0)
    w = GridSpec(0.01, 1.0, 3, "log").values()
    assert abs(w[1] - 0.1) < 1e-15
    assert w[0] == 0.01 and w[2] == 1.0


def test_runconfig_source_exclusivity():
    with pytest.raises(CliInputError):
        RunConfig(
            lambdas=(1.0,),
            covariance_path="x.txt",
            metric=PerceptionMetric.KL,
            distortion=1.0,
            perception=0.5,
        )
    with pytest.raises(CliInputError):
        RunConfig(
            lambdas=None,
            covariance_path=None,
            metric=PerceptionMetric.KL,
            distortion=1.0,
            perception=0.5,
        )


def test_runconfig_metric_budget_coherence():
    with pytest.raises(CliInputError):
        RunConfig(
            lambdas=(1.0,),
            covariance_path=None,
            metric=PerceptionMetric.UNCONSTRAINED,
            distortion=1.0,
            perception=0.5,
        )
    with pytest.raises(CliInputError):
        RunConfig(
            lambdas=(1.0,),
            covariance_path=None,
            metric=PerceptionMetric.KL,
            distortion=1.0,
            perception=math.inf,
        )


def test_covariance_file_matches_inline(tmp_path):
    path = tmp_path / "cov.txt"
    path.write_text("3\n3 0 0\n0 2 0\n0 0 1\n")
    s_file = load_covariance_file(str(path))
    cfg_inline = RunConfig(
        lambdas=(3.0, 2.0, 1.0),
        covariance_path=None,
        metric=PerceptionMetric.UNCONSTRAINED,
        distortion=1.5,
        perception=math.inf,
    )
    cfg_file = RunConfig(
        lambdas=None,
        covariance_path=str(path),
        metric=PerceptionMetric.UNCONSTRAINED,
        distortion=1.5,
        perception=math.inf,
    )
    assert np.array_equal(s_file.lambdas, np.array([3.0, 2.0, 1.0]))
    _, sol_a, _ = run_point(cfg_inline)
    _, sol_b, _ = run_point(cfg_file)
    assert abs(sol_a.total_rate - sol_b.total_rate) <= 1e-10
    assert np.max(np.abs(sol_a.gammas - sol_b.gammas)) <= 1e-10


def test_covariance_diagnostics_name_lines(tmp_path):
    p = tmp_path / "bad1.txt"
    p.write_text("two\n1 0\n0 1\n")
    with pytest.raises(CliInputError, match="line 1"):
        load_covariance_file(str(p))
    p.write_text("2\n1 0\n0\n")
    with pytest.raises(CliInputError, match="line 3"):
        load_covariance_file(str(p))
    p.write_text("2\n1 0 0\n0 1 0\n")
    with pytest.raises(CliInputError, match="line 2"):
        load_covariance_file(str(p))
    p.write_text("")
    with pytest.raises(CliInputError, match="empty"):
        load_covariance_file(str(p))
    with pytest.raises(CliInputError):
        load_covariance_file(str(tmp_path / "missing.txt"))


def test_point_classic_rd_symmetric(capsys):
    code, rec = run_json(
        capsys, ["point", "--lambdas", "1,1", "--metric", "none", "--distortion", "1"]
    )
    assert code == 0
    assert abs(rec["rate_nats"] - math.log(2.0)) < 1e-9


def test_point_w2_perfect_perception(capsys):
    code, rec = run_json(
        capsys,
        [
            "point",
            "--lambdas",
            "1",
            "--metric",
            "w2",
            "--distortion",
            "1",
            "--perception",
            "0",
        ],
    )
    assert code == 0
    assert abs(rec["rate_nats"] - 0.5 * math.log(4.0 / 3.0)) < 1e-9
    assert abs(rec["gammas"][0] - 0.75) < 1e-9


def test_point_kl_inactive_matches_rd(capsys):
    code, rec = run_json(
        capsys,
        [
            "point",
            "--lambdas",
            "1",
            "--metric",
            "kl",
            "--distortion",
            "0.5",
            "--perception",
            "1e9",
        ],
    )
    assert code == 0
    assert abs(rec["rate_nats"] - 0.5 * math.log(2.0)) < 1e-9


def test_point_bits_conversion(capsys):
    code, rec = run_json(
        capsys,
        [
            "point",
            "--lambdas",
            "1,1",
            "--metric",
            "none",
            "--distortion",
            "1",
            "--unit",
            "bits",
        ],
    )
    assert code == 0
    assert rec["rate_bits"] == 1.0


def test_point_csv_format(capsys):
    code = main(
        [
            "point",
            "--lambdas",
            "2,1",
            "--metric",
            "kl",
            "--distortion",
            "1",
            "--perception",
            "0.1",
            "--format",
            "csv",
        ]
    )
    assert code == 0
    sweep = curve_from_csv(capsys.readouterr().out)
    assert len(sweep.solutions) == 1
    assert sweep.solutions[0] is not None
    assert sweep.solutions[0].total_rate > 0.0


def _curve_cfg(**overrides):
    base = dict(
        lambdas=(2.0, 1.0),
        covariance_path=None,
        metric=PerceptionMetric.KL,
        distortion=GridSpec(1.0, 3.0, 3),
        perception=GridSpec(0.05, 0.5, 2),
    )
    base.update(overrides)
    return RunConfig(**base)


def test_curve_grid_major_order():
    sweep = run_curve(_curve_cfg())
    assert sweep.distortions == (1.0, 1.0, 2.0, 2.0, 3.0, 3.0)
    assert sweep.perceptions == (0.05, 0.5) * 3


def test_curve_single_point_reduces_to_point():
    cfg = _curve_cfg(distortion=GridSpec(1.5, 1.5, 1), perception=0.2)
    sweep = run_curve(cfg)
    assert len(sweep.solutions) == 1
    point_cfg = _curve_cfg(distortion=1.5, perception=0.2)
    _, sol, _ = run_point(point_cfg)
    assert sweep.solutions[0].total_rate == sol.total_rate
    assert sweep.solutions[0] == sol


def test_curve_roundtrip_is_lossless():
    sweep = run_curve(_curve_cfg())
    text = curve_to_csv(sweep)
    parsed = curve_from_csv(text)
    assert parsed == sweep
    assert curve_to_csv(parsed) == text


def test_curve_infeasible_rows_do_not_abort():
    cfg = _curve_cfg(distortion=GridSpec(0.0, 3.0, 4), perception=0.2)
    sweep = run_curve(cfg)
    assert sweep.failures[0] == "infeasible"
    assert sweep.solutions[0] is None
    assert all(sol is not None for sol in sweep.solutions[1:])
    text = curve_to_csv(sweep)
    assert curve_from_csv(text) == sweep


def test_curve_jobs_output_identical(tmp_path):
    argv = [
        "curve",
        "--lambdas",
        "3,2,5,4,1",
        "--metric",
        "kl",
        "--distortion",
        "2:12:4",
        "--perception",
        "0.05:0.5:4",
    ]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(argv + ["--jobs", "1", "--output", str(a)]) == 0
    assert main(argv + ["--jobs", "4", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_curve_high_distortion_single_active_component():
    # near the zero-rate boundary only the largest eigenvalue keeps rate
    lams = (3.0, 2.0, 5.0, 4.0, 1.0)
    cfg = RunConfig(
        lambdas=lams,
        covariance_path=None,
        metric=PerceptionMetric.UNCONSTRAINED,
        distortion=GridSpec(sum(lams) - 0.01, sum(lams) - 0.01, 1),
        perception=math.inf,
    )
    sweep = run_curve(cfg)
    sol = sweep.solutions[0]
    active = [i for i, (l, a) in enumerate(zip(lams, sol.allocations)) if a.gamma < l]
    assert active == [2]
    assert lams[2] == 5.0


def test_curve_p0_high_distortion_all_components_active():
    lams = (3.0, 2.0, 5.0, 4.0, 1.0)
    cfg = RunConfig(
        lambdas=lams,
        covariance_path=None,
        metric=PerceptionMetric.KL,
        distortion=GridSpec(2.0 * sum(lams) - 0.1, 2.0 * sum(lams) - 0.1, 1),
        perception=0.0,
    )
    sweep = run_curve(cfg)
    sol = sweep.solutions[0]
    assert all(a.gamma < l for l, a in zip(lams, sol.allocations))
    assert all(a.rate > 0.0 for a in sol.allocations)


def test_verify_passing_report():
    cfg = RunConfig(
        lambdas=(2.0, 1.0),
        covariance_path=None,
        metric=PerceptionMetric.KL,
        distortion=1.0,
        perception=0.05,
        samples=5000,
        seed=3,
    )
    report = run_verify(cfg)
    assert report["all_pass"]
    assert report["rate_agreement_pass"]
    assert report["kkt_pass"]
    assert report["montecarlo_pass"]
    assert report["rate_abs_diff"] <= report["rate_tolerance"]
    assert len(report["montecarlo"]) == 2
    assert report["oracle_method"] == "barrier"


def test_verify_report_bytes_deterministic(capsys):
    argv = [
        "verify",
        "--lambdas",
        "1,0.5",
        "--metric",
        "w2",
        "--distortion",
        "0.8",
        "--perception",
        "0.1",
        "--samples",
        "2000",
        "--seed",
        "11",
    ]
    code_a = main(argv)
    out_a = capsys.readouterr().out
    code_b = main(argv)
    out_b = capsys.readouterr().out
    assert code_a == 0 and code_b == 0
    assert out_a == out_b


def test_verify_zero_rate_is_trivial():
    cfg = RunConfig(
        lambdas=(1.0,),
        covariance_path=None,
        metric=PerceptionMetric.KL,
        distortion=5.0,
        perception=0.0,
        samples=1000,
    )
    report = run_verify(cfg)
    assert report["oracle_method"] == "trivial_zero_rate"
    assert report["all_pass"]
    assert report["solver_rate_nats"] == 0.0


def test_exit_codes_for_bad_input(capsys):
    assert main(["point", "--lambdas", "1,1", "--metric", "none"]) == 1
    capsys.readouterr()
    assert (
        main(
            ["point", "--lambdas", "x", "--metric", "none", "--distortion", "1"]
        )
        == 1
    )
    capsys.readouterr()
    # grids are not allowed for point
    assert (
        main(
            ["point", "--lambdas", "1", "--metric", "none", "--distortion", "1:2:3"]
        )
        == 1
    )
    capsys.readouterr()
    # curve requires at least one grid
    assert (
        main(
            [
                "curve",
                "--lambdas",
                "1",
                "--metric",
                "kl",
                "--distortion",
                "1",
                "--perception",
                "0.5",
            ]
        )
        == 1
    )
    capsys.readouterr()
    # nonpositive distortion is an input error, not a crash
    assert (
        main(["point", "--lambdas", "1", "--metric", "none", "--distortion", "-1"])
        == 1
    )
    capsys.readouterr()


def test_output_file_written(tmp_path):
    out = tmp_path / "point.json"
    code = main(
        [
            "point",
            "--lambdas",
            "1,1",
            "--metric",
            "none",
            "--distortion",
            "1",
            "--output",
            str(out),
        ]
    )
    assert code == 0
    rec = json.loads(out.read_text())
    assert abs(rec["rate_nats"] - math.log(2.0)) < 1e-9
