# src/harness.py
"""
Runs every (problem, D, algorithm, seed) cell of an experiment and appends one
JSON line per finished cell. Cells already in the output file are skipped, so
an interrupted run resumes where it stopped.
"""
import logging
import math
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

from joblib import Parallel, delayed
from pydantic import ValidationError
from tqdm import tqdm

from src.errors import ConfigError
from src.models.experiment import AlgorithmEntry, CellResult, ExperimentConfig, TracePoint, evals_to_success
from src.models.rng import RngState
from src.models.run import AlgorithmSpec
from src.problems import build_problem, problem_names
from src.xrego import algorithm_preset, run_algorithm
from utils.helpers import append_jsonl, drop_torn_tail, load_yaml, read_jsonl, stable_seed
from utils.tracking import PerformanceTracker

logger = logging.getLogger(__name__)

Cell = Tuple[str, int, AlgorithmEntry, int]


def load_experiment_config(path: str) -> ExperimentConfig:
    data = load_yaml(path)
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid experiment config {path}:\n{e}") from e


def cell_id(problem: str, D: int, algorithm: str, seed: int) -> str:
    return f"{problem}|D={D}|{algorithm}|seed={seed}"


def resolve_algorithm(entry: AlgorithmEntry, cfg: ExperimentConfig, d_e: Optional[int]) -> AlgorithmSpec:
    """Preset for ``entry`` with the experiment-wide tolerances applied"""
    spec = algorithm_preset(
        entry.name,
        solver=entry.solver,
        d_e=d_e if entry.known_d_e else None,
        n_stop=cfg.n_stop,
        max_evals=cfg.max_evals,
    )
    updates = {"gamma": cfg.gamma, "epsilon": cfg.epsilon}
    if cfg.max_embeddings is not None and not (entry.known_d_e and spec.stop.max_embeddings == 1):
        updates["max_embeddings"] = cfg.max_embeddings
    return spec.model_copy(update={"stop": spec.stop.model_copy(update=updates)})


def experiment_cells(cfg: ExperimentConfig) -> List[Cell]:
    names = cfg.problems or problem_names()
    unknown = sorted(set(names) - set(problem_names()))
    if unknown:
        raise ConfigError(f"Unknown problems in config: {', '.join(unknown)}")
    return [
        (name, D, entry, seed)
        for D in cfg.dims
        for name in names
        for entry in cfg.algorithms
        for seed in range(cfg.seeds)
    ]


def _finite(value: Optional[float]) -> Optional[float]:
    return value if value is not None and math.isfinite(value) else None


def run_cell(problem: str, D: int, entry: AlgorithmEntry, seed: int, cfg: ExperimentConfig) -> CellResult:
    """One cell; any failure is captured in the returned record"""
    identifier = cell_id(problem, D, entry.algorithm_id, seed)
    base = {"cell_id": identifier, "problem": problem, "D": D, "algorithm": entry.algorithm_id,
            "seed": seed, "epsilon": cfg.epsilon}
    try:
        # the instance depends on (problem, D, seed) only, so all algorithms see the same rotation
        obj = build_problem(problem, D, RngState(seed=stable_seed(cfg.base_seed, problem, D, seed)))
        algorithm = resolve_algorithm(entry, cfg, obj.effective_dim)
        result = run_algorithm(obj, algorithm, RngState(seed=stable_seed(cfg.base_seed, identifier)))
    except Exception as e:
        logger.exception("Cell %s failed", identifier)
        return CellResult(**base, status="failed", error=f"{type(e).__name__}: {e}")

    trace = [TracePoint(cumulative_evals=r.cumulative_evals, f_opt=_finite(r.f_opt)) for r in result.trace]
    return CellResult(
        **base,
        f_star=obj.f_star,
        d_e=obj.effective_dim,
        n_f=evals_to_success(trace, obj.f_star, cfg.epsilon),
        f_opt=_finite(result.f_opt),
        d_e_est=result.d_e_est,
        k_f=result.k_f,
        embeddings=result.embeddings,
        total_evals=result.total_evals,
        trace=trace,
    )


def load_records(path: str) -> List[CellResult]:
    records = []
    for raw in read_jsonl(path):
        try:
            records.append(CellResult.model_validate(raw))
        except ValidationError as e:
            raise ConfigError(f"Malformed record in {path}: {e}") from e
    return records


def run_experiment(
    cfg: ExperimentConfig,
    jobs: int = 1,
    quiet: bool = False,
    tracker: Optional[PerformanceTracker] = None,
) -> List[CellResult]:
    """Run all pending cells, appending each record as soon as it is available.

    Returns every record of the output file, old and new.
    """
    output = Path(cfg.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    if drop_torn_tail(output):
        logger.warning("Dropped an incomplete last record from %s", output)
    existing = load_records(str(output))
    done = {record.cell_id for record in existing}

    pending = [
        cell for cell in experiment_cells(cfg)
        if cell_id(cell[0], cell[1], cell[2].algorithm_id, cell[3]) not in done
    ]
    logger.info("%d cells pending, %d already recorded in %s", len(pending), len(done), output)

    results = list(existing)
    if not pending:
        return results

    produced: Iterator[CellResult] = Parallel(n_jobs=jobs, return_as="generator")(
        delayed(run_cell)(problem, D, entry, seed, cfg) for problem, D, entry, seed in pending
    )
    for record in tqdm(produced, total=len(pending), desc="cells", disable=quiet):
        append_jsonl(output, [record.model_dump(mode="json")])
        results.append(record)
        if tracker is not None:
            tracker.log_metrics({
                "cell_solved": float(record.solved),
                "cell_evals": record.total_evals,
                "cell_embeddings": record.embeddings,
            })

    failed = sum(record.status == "failed" for record in results)
    if failed:
        logger.warning("%d of %d cells failed", failed, len(results))
    return results
