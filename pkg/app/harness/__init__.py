from app.harness.benchmark import (
    ALGORITHMS,
    BenchmarkConfig,
    BenchmarkReport,
    load_benchmark_config,
    run_benchmark,
)
from app.harness.generators import GENERATOR_KINDS, grid_of_cities, random_dag, risky_transfer
from app.harness.oracles import oracle_pareto_bruteforce, oracle_time_expanded_ea
from app.harness.queries import Query, QuerySet, generate_queries
from app.harness.simulation import MonteCarloResult, monte_carlo_eat

__all__ = [
    "ALGORITHMS",
    "BenchmarkConfig",
    "BenchmarkReport",
    "GENERATOR_KINDS",
    "MonteCarloResult",
    "Query",
    "QuerySet",
    "generate_queries",
    "grid_of_cities",
    "load_benchmark_config",
    "monte_carlo_eat",
    "oracle_pareto_bruteforce",
    "oracle_time_expanded_ea",
    "random_dag",
    "risky_transfer",
    "run_benchmark",
]
