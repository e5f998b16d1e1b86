import csv
import io
import math

import pytest

from tunstall_aoi import cli
from tunstall_aoi.experiment import (CSV_HEADER, SweepSpec, binary_entropy, crossover_entropy,
                                     default_p_grid, fmt, inverse_binary_entropy, point_seed,
                                     run_point, run_sweep, splitmix64)
from tunstall_aoi.source_model import ValidationError


def read_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_fmt():
    assert fmt(1 / 3) == "0.333333333"
    assert fmt(math.inf) == "inf"
    assert fmt(None) == "n/a"
    assert fmt(True) == "true" and fmt(7) == "7"


def test_splitmix_reference_values():
    # published splitmix64 outputs for state 0 (first draw) and seeding
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    assert point_seed(0, 0) == splitmix64(0)
    assert point_seed(5, 1) != point_seed(5, 2)


def test_default_grid_spans_entropy_range():
    grid = default_p_grid()
    assert len(grid) == 12
    assert binary_entropy(grid[0]) == pytest.approx(0.05, abs=1e-12)
    assert binary_entropy(grid[-1]) == pytest.approx(0.30, abs=1e-12)
    ratios = [b / a for a, b in zip(grid, grid[1:])]
    assert max(ratios) == pytest.approx(min(ratios), rel=1e-9)
    assert inverse_binary_entropy(1.0) == pytest.approx(0.5, abs=1e-6)  # flat maximum
    assert binary_entropy(inverse_binary_entropy(0.2)) == pytest.approx(0.2, abs=1e-12)


def test_sweep_spec_validation():
    with pytest.raises(ValidationError):
        SweepSpec(p_values=(0.6,))
    with pytest.raises(ValidationError):
        SweepSpec(p_values=(0.0,))
    with pytest.raises(ValidationError):
        SweepSpec(ell=0)


def test_run_point_stable():
    pt = run_point(0.01, n_symbols=50_000, seed=4)
    assert pt.entropy == pytest.approx(binary_entropy(0.01))
    for res in pt.schemes:
        assert res.stable and res.report is not None
        assert math.isfinite(res.low_moment_bound) and math.isfinite(res.delay_bound)
    assert pt.vtf.mgf_bound <= pt.vtf.low_moment_bound
    assert pt.ftv.mgf_bound is None
    rows = read_rows(_csv([pt]))
    assert [r["scheme"] for r in rows] == ["vtf", "ftv"]
    assert rows[1]["mgf_bound"] == "n/a"
    assert "unstable" not in rows[0].values() and "inf" not in rows[0].values()


def test_run_point_p003_is_unstable_for_both():
    # H(0.03) < r_ch/q, yet neither ell=4 Tunstall nor b=4 Huffman reaches that rate
    pt = run_point(0.03, n_symbols=10_000)
    assert binary_entropy(0.03) < 2 / 6.5
    assert pt.vtf.code_rate > 2 / 6.5 and pt.ftv.code_rate > 2 / 6.5
    assert not pt.vtf.stable and not pt.ftv.stable


def test_run_point_half_all_unstable():
    rows = read_rows(_csv([run_point(0.5, n_symbols=1000)]))
    for r in rows:
        assert r["stable"] == "false"
        assert r["sim_mean_delay"] == r["sim_mean_waiting"] == "unstable"
        assert r["low_moment_bound"] == "inf" and r["delay_bound"] == "inf"
    assert rows[0]["mgf_bound"] == "inf"


def test_bounds_dominate_simulation_in_rows():
    pt = run_point(0.015, n_symbols=100_000, seed=8)
    for res in pt.schemes:
        rep = res.report
        assert res.delay_bound >= rep.mean_delay - 3 * rep.stderr_delay
        assert res.aoi_bound >= rep.mean_peak_aoi - 3 * rep.stderr_peak_aoi


def test_huffman_cap_validation():
    with pytest.raises(ValidationError):
        run_point(0.1, b=21, n_symbols=10)


def _csv(points):
    from tunstall_aoi.experiment import write_csv
    buf = io.StringIO()
    write_csv(points, buf)
    return buf.getvalue()


def test_sweep_csv_schema_and_order(tmp_path):
    out = tmp_path / "s.csv"
    spec = SweepSpec(p_values=(0.02, 0.005, 0.5, 0.01), n_symbols=20_000, output_path=str(out))
    points, text = run_sweep(spec)
    assert out.read_text() == text
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    rows = read_rows(text)
    assert len(rows) == 8
    ent = [float(r["entropy"]) for r in rows[::2]]
    assert ent == sorted(ent)
    assert all(len(r) == len(CSV_HEADER) for r in rows)


def test_sweep_empty_is_header_only():
    _, text = run_sweep(SweepSpec(p_values=()))
    assert text == ",".join(CSV_HEADER) + "\n"


def test_sweep_deterministic_and_parallel_agree():
    spec = SweepSpec(p_values=(0.006, 0.012, 0.018), n_symbols=20_000, seed=77)
    _, a = run_sweep(spec)
    _, b = run_sweep(spec)
    assert a == b
    _, c = run_sweep(SweepSpec(p_values=spec.p_values, n_symbols=20_000, seed=77, jobs=2))
    assert a == c


def test_crossover_none_when_ftv_always_wins():
    spec = SweepSpec(p_values=(0.006, 0.012), n_symbols=20_000)
    points, _ = run_sweep(spec)
    assert crossover_entropy(points) is None


# ---- command line ---------------------------------------------------------

def test_cli_analyze_stdout(capsys):
    assert cli.main(["analyze", "--p", "0.01"]) == 0
    rows = read_rows(capsys.readouterr().out)
    assert len(rows) == 2 and rows[0]["sim_mean_delay"] == "n/a"
    assert float(rows[0]["mgf_bound"]) <= float(rows[0]["low_moment_bound"])


def test_cli_simulate_and_config_file(tmp_path, capsys):
    conf = tmp_path / "run.conf"
    conf.write_text("# reference channel\nr_ch = 1/6.5\nq=0.5\nn_symbols=20000\nseed=3\np=0.3\n")
    out = tmp_path / "o.csv"
    # flags override the file
    assert cli.main(["simulate", "--config", str(conf), "--p", "0.01", "-o", str(out)]) == 0
    rows = read_rows(out.read_text())
    assert rows[0]["p"] == "0.01" and rows[0]["seed"] == "3" and rows[0]["n_symbols"] == "20000"


def test_cli_sweep_summary(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert cli.main(["sweep", "--p-values", "0.006,0.012", "--n-symbols", "20000", "-o", str(out)]) == 0
    err = capsys.readouterr().err
    assert "crossover entropy" in err and err.strip().endswith("none")
    assert len(read_rows(out.read_text())) == 4


def test_cli_sweep_same_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli.main(["sweep", "--p-values", "0.01", "--n-symbols", "10000", "--seed", "5",
                         "-o", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv", [
    ["simulate", "--p", "0.7"],
    ["simulate"],
    ["analyze", "--p", "0.1", "--q", "1.5"],
    ["analyze", "--p", "0.1", "--b", "21"],
])
def test_cli_validation_exit_code(argv):
    assert cli.main(argv) == cli.EXIT_VALIDATION


@pytest.mark.parametrize("argv", [["analyze", "--p", "abc"], ["frobnicate"]])
def test_cli_parse_errors_exit_1(argv):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == cli.EXIT_VALIDATION


def test_cli_bad_config(tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("nonsense line\n")
    assert cli.main(["analyze", "--config", str(conf)]) == cli.EXIT_VALIDATION
    conf.write_text("colour = blue\n")
    assert cli.main(["analyze", "--config", str(conf)]) == cli.EXIT_VALIDATION


def test_cli_io_error(tmp_path):
    target = tmp_path / "missing" / "out.csv"
    assert cli.main(["analyze", "--p", "0.01", "-o", str(target)]) == cli.EXIT_IO
    assert cli.main(["analyze", "--config", str(tmp_path / "nope.conf")]) == cli.EXIT_IO

