import json
from fractions import Fraction as F

import pytest

from homstruct.cli import main, parse_config
from homstruct.exact import MetricCase
from homstruct.report import (
    FAIL,
    PASS,
    SUITES,
    Config,
    ConfigError,
    Report,
    plain,
    run_suite,
    to_markdown,
)
from homstruct.structures import Family

SMALL = dict(samples_per_case=1, identity_sample_count=16, group_points=4)


# -- configuration -------------------------------------------------------------------


def test_parse_verify_example():
    _, cfg = parse_config(["verify", "--case", "symmetric", "--samples", "8",
                           "--seed", "42", "--out", "r.json"])
    assert cfg.cases == (MetricCase.SYMMETRIC,)
    assert cfg.samples_per_case == 8 and cfg.seed == 42 and cfg.output_path == "r.json"


def test_parse_solve_mode():
    args, cfg = parse_config(["solve", "--lambda", "-2/1", "--mu", "1", "--nu", "1"])
    assert cfg is None
    assert (args.lam, args.mu, args.nu) == (F(-2), F(1), F(1))


def test_cases_comma_separated_and_all():
    _, cfg = parse_config(["verify", "--case", "generic,timelike"])
    assert cfg.cases == (MetricCase.GENERIC, MetricCase.TIMELIKE)
    _, cfg = parse_config(["verify", "--case", "all"])
    assert set(cfg.cases) == set(MetricCase)


@pytest.mark.parametrize("argv", [
    ["verify", "--samples", "0"],
    ["verify", "--case", "all", "--case", "generic"],
    ["verify", "--case", "generic", "--case", "generic"],
    ["verify", "--case", "bogus"],
    ["verify", "--identity-samples", "4"],
    ["verify", "--suite", "no.such.suite"],
    ["tables", "--which", "table9"],
])
def test_invalid_configs_rejected(argv):
    with pytest.raises(ConfigError):
        parse_config(argv)


def test_low_identity_samples_need_unsafe_flag():
    _, cfg = parse_config(["verify", "--identity-samples", "4", "--unsafe-low-samples"])
    assert cfg.identity_sample_count == 4


def test_malformed_rational_rejected():
    with pytest.raises(SystemExit) as exc:
        parse_config(["solve", "--lambda", "1/0", "--mu", "1", "--nu", "1"])
    assert exc.value.code == 2


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit) as exc:
        parse_config(["verify", "--frobnicate"])
    assert exc.value.code == 2


def test_config_file_and_flag_override(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"seed": 7, "samples_per_case": 3, "cases": ["generic"]}))
    _, cfg = parse_config(["verify", "--config", str(path), "--samples", "2"])
    assert cfg.seed == 7 and cfg.samples_per_case == 2 and cfg.cases == (MetricCase.GENERIC,)
    path.write_text(json.dumps({"seeed": 7}))
    with pytest.raises(ConfigError, match="seeed"):
        parse_config(["verify", "--config", str(path)])


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("HOMSTRUCT_SEED", "99")
    assert parse_config(["verify"])[1].seed == 99
    assert parse_config(["verify", "--seed", "3"])[1].seed == 3
    monkeypatch.setenv("HOMSTRUCT_SEED", "nope")
    with pytest.raises(ConfigError):
        parse_config(["verify"])


# -- report content --------------------------------------------------------------------


def test_plain_serializes_rationals_as_strings():
    assert plain({"x": F(-3, 2), "ys": (F(1), 2)}) == {"x": "-3/2", "ys": ["1/1", 2]}


@pytest.fixture(scope="module")
def small_report():
    cfg = Config(cases=(MetricCase.TIMELIKE, MetricCase.GENERIC), **SMALL)
    return run_suite(cfg)


def test_report_schema(small_report):
    d = json.loads(small_report.to_json())
    assert set(d) >= {"version", "config", "suites", "tables"}
    assert d["version"] == 1
    for rec in d["suites"]:
        assert set(rec) == {"id", "case", "params", "status", "details"}
        assert rec["status"] in (PASS, FAIL, "SAMPLED")
        assert all(isinstance(p, str) and "/" in p for p in rec["params"])
    assert "1.0" not in small_report.to_json() and "0.5" not in small_report.to_json()


def test_json_round_trip(small_report):
    assert Report.from_json(small_report.to_json()) == small_report


def test_records_are_sorted(small_report):
    keys = [(r["id"], r["case"], json.dumps(r["params"])) for r in small_report.suites]
    assert keys == sorted(keys)


def test_same_config_gives_identical_json():
    cfg = Config(cases=(MetricCase.SPACELIKE_MU,), **SMALL)
    assert run_suite(cfg).to_json() == run_suite(cfg).to_json()


def test_seed_changes_samples():
    a = run_suite(Config(cases=(MetricCase.GENERIC,), suites=("lie.closed-forms",), seed=1))
    b = run_suite(Config(cases=(MetricCase.GENERIC,), suites=("lie.closed-forms",), seed=2))
    assert a.suites[0]["details"]["points"] != b.suites[0]["details"]["points"]


def test_markdown_table1_has_one_row_per_case():
    cfg = Config(suites=("solver.catalog", "reductive.holonomy"), samples_per_case=1)
    md = to_markdown(run_suite(cfg))
    section = md.split('<a id="table1"></a>')[1].split("<a id=")[0]
    rows = [l for l in section.splitlines() if l.startswith("| ") and not l.startswith("| metric")]
    assert len(rows) == 5
    for case in MetricCase:
        assert any(case.value in r for r in rows)


def test_table2_has_five_family_rows():
    cfg = Config(cases=(MetricCase.SYMMETRIC,), suites=("reductive.table2", "reductive.holonomy"),
                 samples_per_case=1)
    rows = run_suite(cfg).tables["table2"]
    assert len(rows) == 5
    assert all(r["status"] == PASS for r in rows)


def test_corrupted_catalog_fails_naming_the_coefficient(monkeypatch):
    import homstruct.structures as st_mod

    real = st_mod._family_coeffs

    def corrupted(name, g, t):
        c = real(name, g, t)
        if name is Family.SLAMBDA:
            c[3] = c[3] + 1  # sigma0
            c[7] = c[7] + 1  # tau1
        return c

    monkeypatch.setattr(st_mod, "_family_coeffs", corrupted)
    report = run_suite(Config(cases=(MetricCase.TIMELIKE,), suites=("solver.catalog",),
                              samples_per_case=2))
    assert report.status == FAIL
    rec = report.failures()[0]
    assert "Slambda" in rec["details"]["violations"]
    assert rec["details"]["violations"]["Slambda"][0][0] == "tau1"


# -- the command line ---------------------------------------------------------------------


def test_exit_zero_on_pass(capsys):
    assert main(["verify", "--case", "generic", "--samples", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == PASS


def test_exit_one_on_fail(capsys):
    code = main(["verify", "--case", "symmetric", "--suite", "contact.stabilizer"])
    assert code == 1
    assert json.loads(capsys.readouterr().out)["status"] == FAIL


def test_exit_two_on_config_error(capsys):
    assert main(["verify", "--samples", "0"]) == 2
    assert "samples_per_case" in capsys.readouterr().err


def test_solve_subcommand(capsys):
    assert main(["solve", "--lambda", "-2/1", "--mu", "1", "--nu", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["suites"][0]["id"] == "solver.point"


def test_group_single_metric_requires_t(capsys):
    assert main(["group", "--lambda", "-2", "--mu", "1", "--nu", "1", "--which", "expansion"]) == 2
    assert main(["group", "--lambda", "-2", "--mu", "1", "--nu", "1", "--t", "3",
                 "--which", "expansion", "--points", "4"]) == 0


def test_tables_subcommand_markdown(capsys):
    code = main(["tables", "--case", "symmetric", "--which", "table2", "--format", "markdown",
                 "--samples", "1"])
    assert code == 0
    md = capsys.readouterr().out
    assert '<a id="table2"></a>' in md and '<a id="table1"></a>' not in md


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert main(["verify", "--case", "generic", "--suite", "lie.closed-forms", "--out", str(path)]) == 0
    assert json.loads(path.read_text())["status"] == PASS
    assert "PASS" in capsys.readouterr().err


def test_unwritable_path(tmp_path):
    bad = tmp_path / "missing" / "r.json"
    assert main(["verify", "--case", "generic", "--suite", "lie.closed-forms", "--out", str(bad)]) == 2


def test_every_suite_is_registered_with_a_runner():
    assert all(callable(s.run) for s in SUITES.values())
