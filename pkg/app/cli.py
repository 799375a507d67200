"""
Línea de comandos `connscan`.

    connscan ea --timetable horario.txt --from s --to t --time 08:00 --journey
    connscan profile --timetable horario.txt --from s --to t --pareto --leg-max 3 --extract
    connscan profile --timetable horario.txt --from s --to t --time 08:00 --range
    connscan meat --timetable horario.txt --from s --to t --time 08:00 --alpha 2 --emit dot
    connscan accel build --timetable horario.txt --k 4 --levels 2 --out indice.json
    connscan accel query --timetable horario.txt --index indice.json --kind ea --from s --to t --time 08:00
    connscan gen --kind grid --seed 1 --out grid.txt
    connscan bench --config bench.yaml --out report.jsonl
"""

from pathlib import Path
from typing import List, Optional

import click

from app.config import DEFAULT_ALPHA, DEFAULT_LEG_MAX, DEFAULT_MAX_DELAY, PARTITION_IMBALANCE, setup_logging
from app.ea.scan import EaOptions, earliest_arrival_with_pointers
from app.errors import ConnScanError
from app.harness.benchmark import build_instance, load_benchmark_config, run_benchmark
from app.harness.generators import GENERATOR_KINDS, RISKY_VARIANTS, grid_of_cities, random_dag, risky_transfer
from app.harness.simulation import monte_carlo_eat
from app.meat.delay import DelayModel
from app.meat.graph import to_dot, to_text
from app.meat.solver import solve_alpha_bounded
from app.overlay.customize import customize
from app.overlay.partition import format_partition, partition_stops
from app.overlay.query import QUERY_KINDS, accel_query
from app.overlay.storage import load_overlay, save_overlay
from app.profile.extraction import extract_profile_journey
from app.profile.scan import ProfileOptions, ea_profile, filter_range, pareto_profile, range_query
from app.profile.store import ProfileStore
from app.timetable.clock import format_clock, parse_clock
from app.timetable.loader import dump_timetable, load_timetable_file
from app.timetable.model import AuxIndexes, Timetable, build_aux_indexes


def _load(path: str, closure: bool) -> Timetable:
    return load_timetable_file(path, synthesize_closure=closure)


class ClockType(click.ParamType):
    name = "hora"

    def convert(self, value, param, ctx):
        if isinstance(value, int):
            return value
        try:
            return parse_clock(value)
        except ConnScanError as e:
            self.fail(str(e), param, ctx)


CLOCK = ClockType()


class ConnScanGroup(click.Group):
    """Convierte los errores del motor en errores de línea de comandos"""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ConnScanError as e:
            raise click.ClickException(f"{type(e).__name__}: {e}") from e


@click.group(cls=ConnScanGroup)
@click.option("--log-level", default="WARNING", show_default=True)
def cli(log_level: str) -> None:
    """Rutas en horarios de transporte con Connection Scan"""
    setup_logging(log_level)


def timetable_option(f):
    f = click.option(
        "--synthesize-closure", "closure", is_flag=True, help="Completa las caminatas por clausura transitiva"
    )(f)
    return click.option("--timetable", required=True, type=click.Path(exists=True, dir_okay=False))(f)


def _entry_line(store: ProfileStore, dep: int, value) -> str:
    if store.is_pareto:
        arrivals = [format_clock(int(v)) for v in value]
    else:
        arrivals = [format_clock(store.encoding.arrival(value))]
    return f"dep={format_clock(dep)} arr=[{','.join(arrivals)}]"


def _print_entries(
    tt: Timetable, store: ProfileStore, stop: int, pairs: List, aux: Optional[AuxIndexes] = None
) -> None:
    """Una línea por entrada; con `aux` cada entrada va seguida de su viaje"""
    for dep, value in pairs:
        click.echo(_entry_line(store, dep, value))
        if aux is None:
            continue
        journey = extract_profile_journey(tt, aux, store, stop, dep, legs=store.leg_max)
        if journey is None:
            click.echo("  sin viaje")
            continue
        for line in journey.describe(tt):
            click.echo(f"  {line}")


# ==================== CONSULTAS BASE ====================

@cli.command()
@timetable_option
@click.option("--from", "source", required=True)
@click.option("--to", "target", required=True)
@click.option("--time", "tau", type=CLOCK, required=True)
@click.option("--no-start-crit", is_flag=True)
@click.option("--no-stop-crit", is_flag=True)
@click.option("--no-limited-walking", is_flag=True)
@click.option("--journey", "show_journey", is_flag=True, help="Imprime también el viaje, un tramo por línea")
def ea(timetable, closure, source, target, tau, no_start_crit, no_stop_crit, no_limited_walking, show_journey):
    """Llegada más temprana y, si se pide, un viaje que la realiza"""
    tt = _load(timetable, closure)
    s, t = tt.stop_id(source), tt.stop_id(target)
    opts = EaOptions(not no_start_crit, not no_stop_crit, not no_limited_walking)
    found = earliest_arrival_with_pointers(tt, s, tau, t, opts)
    if found is None:
        click.echo("sin viaje")
        return
    arrival, journey = found
    click.echo(format_clock(arrival))
    if show_journey:
        for line in journey.describe(tt):
            click.echo(line)


@cli.command()
@timetable_option
@click.option("--to", "target", required=True)
@click.option("--from", "source", default=None)
@click.option("--time", "tau", type=CLOCK, default=None, help="Solo salidas desde esta hora")
@click.option("--pareto", is_flag=True, help="Perfil de Pareto por número de tramos")
@click.option("--leg-max", type=int, default=DEFAULT_LEG_MAX, show_default=True)
@click.option("--range", "by_range", is_flag=True, help="Consulta por rango desde --time")
@click.option("--round-bits", type=int, default=None, help="Desempate por tramos con r bits de redondeo")
@click.option("--extract", is_flag=True, help="Extrae el viaje de cada entrada")
def profile(timetable, closure, target, source, tau, pareto, leg_max, by_range, round_bits, extract):
    """Perfil hacia el destino (escalar o de Pareto); sin --from, de todas las paradas"""
    if source is None and (tau is not None or by_range or extract):
        raise click.UsageError("--time, --range y --extract necesitan --from")
    if by_range and tau is None:
        raise click.UsageError("--range necesita --time")
    if pareto and round_bits is not None:
        raise click.UsageError("--round-bits solo se aplica al perfil escalar")

    tt = _load(timetable, closure)
    t = tt.stop_id(target)
    s = tt.stop_id(source) if source is not None else None
    opts = ProfileOptions(
        source=s,
        leg_tiebreak=round_bits is not None,
        rounding_bits=round_bits or 0,
    )
    legs = leg_max if pareto else None

    if by_range:
        result = range_query(tt, s, tau, t, legs, opts)
        if not result.reachable:
            click.echo("sin viaje")
            return
        store = result.store
        pairs = filter_range(store.pairs(s), tau, result.horizon, store.encoding)
        click.echo(f"rango [{format_clock(tau)}, {format_clock(result.horizon)}], "
                   f"{result.scanned} conexiones escaneadas", err=True)
    else:
        store = pareto_profile(tt, t, leg_max, opts) if pareto else ea_profile(tt, t, opts)
        if s is None:
            for stop in tt.stops:
                pairs = store.pairs(stop.id)
                if stop.id == t or not pairs:
                    continue
                click.echo(f"{stop.code}:")
                _print_entries(tt, store, stop.id, pairs)
            return
        pairs = [(dep, value) for dep, value in store.pairs(s) if tau is None or dep >= tau]

    _print_entries(tt, store, s, pairs, build_aux_indexes(tt) if extract else None)


@cli.command()
@timetable_option
@click.option("--from", "source", required=True)
@click.option("--to", "target", required=True)
@click.option("--time", "tau", type=CLOCK, required=True)
@click.option("--alpha", type=float, default=DEFAULT_ALPHA, show_default=True)
@click.option("--max-delay", type=int, default=DEFAULT_MAX_DELAY, show_default=True)
@click.option("--beta", type=float, default=0.0, show_default=True)
@click.option("--arc-budget", type=int, default=None, help="Máximo de arcos del grafo compacto")
@click.option("--emit", type=click.Choice(["text", "dot"]), default="text", show_default=True)
@click.option("--compact", is_flag=True)
@click.option("--simulate", "samples", type=int, default=None, help="Muestras Monte Carlo sobre el grafo")
def meat(timetable, closure, source, target, tau, alpha, max_delay, beta, arc_budget, emit, compact, samples):
    """Grafo de decisión con llegada esperada mínima bajo retrasos"""
    tt = _load(timetable, closure)
    s, t = tt.stop_id(source), tt.stop_id(target)
    model = DelayModel(max_delay)
    solution = solve_alpha_bounded(tt, s, tau, t, alpha, model, beta, arc_budget)
    if solution is None:
        click.echo("sin viaje seguro")
        return
    render = to_dot if emit == "dot" else to_text
    click.echo(render(solution.graph, solution.timetable, compact=compact))
    if samples is not None:
        sim = monte_carlo_eat(solution.timetable, solution.graph, model, samples)
        click.echo(f"simulación: media {sim.mean:.1f} ± {sim.stderr:.1f} s")


# ==================== OVERLAY ====================

@cli.group()
def accel():
    """Índice de overlay multinivel"""


@accel.command("build")
@timetable_option
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--levels", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--imbalance", type=float, default=PARTITION_IMBALANCE, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--partition-out", type=click.Path(dir_okay=False), default=None)
def accel_build(timetable, closure, k, levels, seed, imbalance, threads, out, partition_out):
    tt = _load(timetable, closure)
    partition = partition_stops(tt, k, levels, seed=seed, imbalance=imbalance)
    if partition_out:
        Path(partition_out).write_text(format_partition(tt, partition), encoding="utf-8")
    index = customize(tt, partition, threads=threads, seed=seed)
    save_overlay(index, out)
    click.echo(f"{len(index.cells)} celdas, {index.total_connections()} conexiones")


@accel.command("query")
@timetable_option
@click.option("--index", "index_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--kind", type=click.Choice(QUERY_KINDS), default="ea", show_default=True)
@click.option("--from", "source", required=True)
@click.option("--to", "target", required=True)
@click.option("--time", "tau", type=CLOCK, default=None)
@click.option("--leg-max", type=int, default=DEFAULT_LEG_MAX, show_default=True)
def accel_query_command(timetable, closure, index_path, kind, source, target, tau, leg_max):
    tt = _load(timetable, closure)
    index = load_overlay(index_path, tt)
    s, t = tt.stop_id(source), tt.stop_id(target)
    result = accel_query(index, tt, s, tau, t, kind, leg_max if kind == "pareto-profile" else None)
    if kind == "ea":
        click.echo(format_clock(result.arrival) if result.arrival is not None else "sin viaje")
        click.echo(f"{result.scanned} conexiones escaneadas", err=True)
        return
    if kind == "range":
        if not result.reachable:
            click.echo("sin viaje")
            return
        store, scanned = result.store, result.scanned
        pairs = filter_range(store.pairs(s), tau, result.horizon, store.encoding)
    else:
        store, scanned = result, result.scanned
        pairs = [(dep, value) for dep, value in store.pairs(s) if tau is None or dep >= tau]
    _print_entries(tt, store, s, pairs)
    click.echo(f"{scanned} conexiones escaneadas", err=True)


# ==================== GENERADORES Y BENCHMARK ====================

@cli.command()
@click.option("--kind", type=click.Choice(GENERATOR_KINDS), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--cities", type=int, default=10, show_default=True)
@click.option("--stops-per-city", type=int, default=30, show_default=True)
@click.option("--stops", type=int, default=20, show_default=True)
@click.option("--connections", type=int, default=200, show_default=True)
@click.option("--footpaths", type=int, default=0, show_default=True)
@click.option("--variant", type=click.Choice(RISKY_VARIANTS), default="backup-chain", show_default=True)
def gen(kind, seed, out, cities, stops_per_city, stops, connections, footpaths, variant):
    """Escribe un horario sintético"""
    if kind == "grid":
        tt = grid_of_cities(cities, stops_per_city, seed)
    elif kind == "random":
        tt = random_dag(stops, connections, seed, footpaths)
    else:
        tt = risky_transfer(variant)
    Path(out).write_text(dump_timetable(tt), encoding="utf-8")
    click.echo(repr(tt))


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--timetable", default=None, type=click.Path(exists=True, dir_okay=False),
              help="Horario; si falta se genera según `instance` de la configuración")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def bench(config_path, timetable, out):
    """Ejecuta la matriz algoritmo × consulta y escribe el informe JSON-lines"""
    config = load_benchmark_config(Path(config_path).read_text(encoding="utf-8"))
    if timetable is not None:
        tt = _load(timetable, False)
    elif config.instance is not None:
        tt = build_instance(config.instance)
    else:
        raise click.UsageError("hace falta --timetable o una sección `instance` en la configuración")
    report = run_benchmark(tt, config)
    Path(out).write_text(report.to_json_lines(), encoding="utf-8")
    for summary in report.summaries.values():
        click.echo(f"{summary.algorithm}: {summary.mean_ms:.3f} ms (mediana {summary.median_ms:.3f}), "
                   f"{summary.mean_scanned:.1f} conexiones")
    click.echo(report.status)
    if report.failed:
        raise SystemExit(1)


def main(argv: Optional[list] = None) -> None:
    cli.main(args=argv, prog_name="connscan")
