"""Deterministic Monte Carlo replication harness.

Each replication gets its own generator seeded from (seed, rep), so
results are identical whether replications run serially or across
worker processes; scheduling order cannot leak into the outputs.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np


def rep_rng(seed: int, rep: int) -> np.random.Generator:
    """The generator assigned to one replication."""
    return np.random.default_rng([seed, rep])


def _run_chunk(args):
    fn, seed, reps = args
    return [fn(rep_rng(seed, rep)) for rep in reps]


def replicate(fn, n_reps: int, seed: int, workers: int = 1) -> np.ndarray:
    """Evaluate ``fn(rng)`` for n_reps independent generators.

    ``fn`` must be picklable (a module-level function) when workers > 1.
    Results come back in replication order regardless of scheduling.
    """
    if n_reps < 1:
        raise ValueError("need at least one replication")
    if workers <= 1:
        return np.asarray([fn(rep_rng(seed, rep)) for rep in range(n_reps)])
    chunks = np.array_split(np.arange(n_reps), workers * 4)
    chunks = [c for c in chunks if c.size]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_run_chunk, [(fn, seed, list(c)) for c in chunks])
    out: list = []
    for part in parts:
        out.extend(part)
    return np.asarray(out)
