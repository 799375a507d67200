import pytest
from click.testing import CliRunner

from app.cli import cli
from app.timetable.loader import load_timetable_file


SCALAR_AT_S = ["dep=00:00:06 arr=[00:00:11]", "dep=00:00:07 arr=[00:00:12]"]
PARETO_AT_S = [
    "dep=00:00:05 arr=[00:00:14,00:00:12,00:00:11]",
    "dep=00:00:06 arr=[∞,00:00:12,00:00:11]",
    "dep=00:00:07 arr=[∞,00:00:12,00:00:12]",
]


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def risky_file(runner, tmp_path):
    path = tmp_path / "risky.txt"
    result = runner.invoke(cli, ["gen", "--kind", "risky", "--variant", "simple", "--out", str(path)])
    assert result.exit_code == 0, result.output
    return str(path)


# ==================== EA ====================

def test_ea_prints_arrival(runner, hops_file):
    result = runner.invoke(cli, ["ea", "--timetable", hops_file, "--from", "s", "--to", "t", "--time", "5"])
    assert result.exit_code == 0, result.output
    assert result.output.splitlines() == ["00:00:11"]


def test_ea_prints_journey(runner, hops_file):
    result = runner.invoke(
        cli, ["ea", "--timetable", hops_file, "--from", "s", "--to", "t", "--time", "00:00:05", "--journey"]
    )
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == "00:00:11"
    assert lines[1].strip() == "s 00:00:06 -> x 00:00:07 (sx)"
    assert len(lines) == 4


@pytest.mark.parametrize("flag", ["--no-start-crit", "--no-stop-crit", "--no-limited-walking", "--synthesize-closure"])
def test_ea_flags_keep_the_answer(runner, hops_file, flag):
    result = runner.invoke(
        cli, ["ea", "--timetable", hops_file, "--from", "s", "--to", "t", "--time", "5", flag]
    )
    assert result.exit_code == 0, result.output
    assert result.output.splitlines() == ["00:00:11"]


def test_ea_without_journey(runner, hops_file):
    result = runner.invoke(cli, ["ea", "--timetable", hops_file, "--from", "s", "--to", "t", "--time", "00:00:11"])
    assert result.exit_code == 0
    assert result.output.strip() == "sin viaje"


def test_unknown_stop_exits_with_error(runner, hops_file):
    result = runner.invoke(cli, ["ea", "--timetable", hops_file, "--from", "nowhere", "--to", "t", "--time", "5"])
    assert result.exit_code == 1
    assert "InvalidStopError" in result.output


def test_bad_clock_is_a_usage_error(runner, hops_file):
    result = runner.invoke(cli, ["ea", "--timetable", hops_file, "--from", "s", "--to", "t", "--time", "8h"])
    assert result.exit_code == 2


def test_timetable_is_required(runner):
    result = runner.invoke(cli, ["ea", "--from", "s", "--to", "t", "--time", "5"])
    assert result.exit_code == 2


# ==================== PERFILES ====================

def test_scalar_profile(runner, hops_file):
    result = runner.invoke(cli, ["profile", "--timetable", hops_file, "--from", "s", "--to", "t"])
    assert result.exit_code == 0, result.output
    assert result.output.splitlines() == SCALAR_AT_S


def test_scalar_profile_filtered_by_time(runner, hops_file):
    result = runner.invoke(
        cli, ["profile", "--timetable", hops_file, "--from", "s", "--to", "t", "--time", "00:00:07"]
    )
    assert result.exit_code == 0, result.output
    assert result.output.splitlines() == SCALAR_AT_S[1:]


def test_profile_of_every_stop(runner, hops_file):
    result = runner.invoke(cli, ["profile", "--timetable", hops_file, "--to", "t"])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    start = lines.index("s:")
    assert lines[start + 1:start + 3] == SCALAR_AT_S
    assert "t:" not in lines


def test_round_bits_keep_scalar_arrivals(runner, hops_file):
    result = runner.invoke(
        cli, ["profile", "--timetable", hops_file, "--from", "s", "--to", "t", "--round-bits", "0"]
    )
    assert result.exit_code == 0, result.output
    assert result.output.splitlines() == SCALAR_AT_S


def test_pareto_profile(runner, hops_file):
    result = runner.invoke(
        cli, ["profile", "--timetable", hops_file, "--from", "s", "--to", "t", "--pareto", "--leg-max", "3"]
    )
    assert result.exit_code == 0, result.output
    assert result.output.splitlines() == PARETO_AT_S


def test_range_profile(runner, hops_file):
    result = runner.invoke(
        cli, ["profile", "--timetable", hops_file, "--from", "s", "--to", "t", "--time", "5", "--range"]
    )
    assert result.exit_code == 0, result.output
    assert result.stdout.splitlines() == SCALAR_AT_S
    assert "rango [00:00:05, 00:00:17]" in result.stderr


def test_profile_extracts_each_entry(runner, hops_file):
    result = runner.invoke(
        cli, ["profile", "--timetable", hops_file, "--from", "s", "--to", "t", "--extract"]
    )
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == SCALAR_AT_S[0]
    assert lines[1] == "  s 00:00:06 -> x 00:00:07 (sx)"
    assert SCALAR_AT_S[1] in lines
    assert all(line.startswith("  ") for line in lines if not line.startswith("dep="))


def test_pareto_extraction(runner, hops_file):
    result = runner.invoke(
        cli,
        ["profile", "--timetable", hops_file, "--from", "s", "--to", "t", "--pareto", "--leg-max", "3", "--extract"],
    )
    assert result.exit_code == 0, result.output
    entries = [line for line in result.output.splitlines() if line.startswith("dep=")]
    assert entries == PARETO_AT_S


@pytest.mark.parametrize(
    "extra",
    [
        ["--from", "s", "--range"],
        ["--time", "5"],
        ["--extract"],
        ["--from", "s", "--pareto", "--round-bits", "2"],
    ],
)
def test_profile_usage_errors(runner, hops_file, extra):
    result = runner.invoke(cli, ["profile", "--timetable", hops_file, "--to", "t"] + extra)
    assert result.exit_code == 2


# ==================== MEAT ====================

def test_meat_text_and_dot(runner, risky_file):
    args = ["meat", "--timetable", risky_file, "--from", "s", "--to", "t", "--time", "0", "--max-delay", "1200"]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output
    assert "(RISKY)" in result.output
    assert "(BACKUP)" in result.output

    result = runner.invoke(cli, args + ["--emit", "dot", "--compact"])
    assert result.exit_code == 0, result.output
    assert result.output.startswith("digraph decision {")


def test_meat_without_safe_journey(runner, risky_file):
    result = runner.invoke(cli, ["meat", "--timetable", risky_file, "--from", "t", "--to", "s", "--time", "0"])
    assert result.exit_code == 0
    assert result.output.strip() == "sin viaje seguro"


def test_meat_rejects_small_alpha(runner, risky_file):
    result = runner.invoke(
        cli, ["meat", "--timetable", risky_file, "--from", "s", "--to", "t", "--time", "0", "--alpha", "0.5"]
    )
    assert result.exit_code == 1
    assert "InvalidParameterError" in result.output


def test_meat_arc_budget(runner, risky_file):
    args = ["meat", "--timetable", risky_file, "--from", "s", "--to", "t", "--time", "0", "--max-delay", "1200"]
    result = runner.invoke(cli, args + ["--arc-budget", "100"])
    assert result.exit_code == 0, result.output
    assert result.output.strip()

    result = runner.invoke(cli, args + ["--arc-budget", "0"])
    assert result.exit_code == 1
    assert "InvalidParameterError" in result.output


def test_meat_accepts_beta(runner, risky_file):
    result = runner.invoke(
        cli,
        ["meat", "--timetable", risky_file, "--from", "s", "--to", "t", "--time", "0", "--beta", "0.5"],
    )
    assert result.exit_code == 0, result.output


def test_meat_simulation_line(runner, risky_file):
    result = runner.invoke(
        cli,
        ["meat", "--timetable", risky_file, "--from", "s", "--to", "t", "--time", "0", "--max-delay", "1200",
         "--simulate", "2000"],
    )
    assert result.exit_code == 0, result.output
    last = result.output.splitlines()[-1]
    assert last.startswith("simulación: media ")
    assert last.endswith(" s")


# ==================== OVERLAY ====================

@pytest.fixture
def hops_index(runner, hops_file, tmp_path):
    index = tmp_path / "hops.overlay.json"
    partition = tmp_path / "hops.partition"
    result = runner.invoke(
        cli,
        ["accel", "build", "--timetable", hops_file, "--k", "2", "--levels", "1",
         "--out", str(index), "--partition-out", str(partition)],
    )
    assert result.exit_code == 0, result.output
    assert partition.read_text(encoding="utf-8").startswith("# k=2 levels=1")
    return str(index)


def _accel(runner, hops_file, hops_index, *args):
    return runner.invoke(
        cli, ["accel", "query", "--timetable", hops_file, "--index", hops_index, "--from", "s", "--to", "t", *args]
    )


def test_accel_query_ea(runner, hops_file, hops_index):
    result = _accel(runner, hops_file, hops_index, "--kind", "ea", "--time", "5")
    assert result.exit_code == 0, result.output
    assert result.stdout.splitlines() == ["00:00:11"]
    assert "conexiones escaneadas" in result.stderr


def test_accel_query_profiles(runner, hops_file, hops_index):
    result = _accel(runner, hops_file, hops_index, "--kind", "ea-profile")
    assert result.exit_code == 0, result.output
    assert result.stdout.splitlines() == SCALAR_AT_S

    result = _accel(runner, hops_file, hops_index, "--kind", "pareto-profile", "--leg-max", "3")
    assert result.exit_code == 0, result.output
    assert result.stdout.splitlines() == PARETO_AT_S


def test_accel_query_range(runner, hops_file, hops_index):
    result = _accel(runner, hops_file, hops_index, "--kind", "range", "--time", "5")
    assert result.exit_code == 0, result.output
    assert result.stdout.splitlines() == SCALAR_AT_S


def test_accel_ea_needs_time(runner, hops_file, hops_index):
    result = _accel(runner, hops_file, hops_index, "--kind", "ea")
    assert result.exit_code == 1
    assert "InvalidParameterError" in result.output


def test_accel_query_against_other_timetable(runner, hops_index, risky_file):
    result = runner.invoke(
        cli,
        ["accel", "query", "--timetable", risky_file, "--index", hops_index,
         "--from", "s", "--to", "t", "--time", "0"],
    )
    assert result.exit_code == 1
    assert "IndexMismatchError" in result.output


# ==================== GENERADORES Y BENCHMARK ====================

def test_gen_writes_loadable_timetable(runner, tmp_path):
    path = tmp_path / "random.txt"
    result = runner.invoke(
        cli,
        ["gen", "--kind", "random", "--seed", "5", "--stops", "6", "--connections", "30", "--out", str(path)],
    )
    assert result.exit_code == 0, result.output
    tt = load_timetable_file(path)
    assert tt.num_stops == 6
    assert tt.num_connections == 30


def test_bench_from_instance(runner, tmp_path):
    config = tmp_path / "bench.yaml"
    config.write_text(
        "queries: 5\n"
        "algorithms: [ea, ea-nostop, ea-plain]\n"
        "instance:\n  kind: random\n  seed: 1\n  params: {stops: 8, connections: 60}\n",
        encoding="utf-8",
    )
    out = tmp_path / "report.jsonl"
    result = runner.invoke(cli, ["bench", "--config", str(config), "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert result.output.splitlines()[-1] == "PASSED"
    assert '"type": "status"' in out.read_text(encoding="utf-8").splitlines()[-1]


def test_bench_needs_a_timetable(runner, tmp_path):
    config = tmp_path / "bench.yaml"
    config.write_text("queries: 2\n", encoding="utf-8")
    result = runner.invoke(cli, ["bench", "--config", str(config), "--out", str(tmp_path / "r.jsonl")])
    assert result.exit_code == 2
