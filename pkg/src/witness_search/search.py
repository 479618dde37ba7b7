"""Falsification search over classical-mediator pipelines.

The sample space is cut into fixed-size chunks. Each chunk draws from its
own generator spawned from one SeedSequence, chunks may run on any number of
worker threads, and results are folded in chunk order, so the summary does
not depend on the worker count.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
from witness_search.hybrid_state import HybridState, final_ab_state
from witness_search.instruments import apply_step
from witness_search.oracles import chsh_max, negativity
from witness_search.sampling import (
    Pipeline,
    grid_pipelines,
    grid_size,
    random_pipeline,
)

from errors import BudgetError

logger = logging.getLogger(__name__)

SUPPORTED_DIMENSIONS = (2, 3, 4)
MAX_STEPS = 4


@dataclass(frozen=True)
class SearchBudget:
    d: int = 2
    steps: int = 2
    samples: int = 10000
    grid: int = 4
    seed: int = 7
    workers: int = 1
    chunk_size: int = 500

    def __post_init__(self):
        if self.d not in SUPPORTED_DIMENSIONS:
            raise BudgetError(
                f"Mediator dimension {self.d} not in {SUPPORTED_DIMENSIONS}"
            )
        if not 1 <= self.steps <= MAX_STEPS:
            raise BudgetError(f"Step count {self.steps} outside 1..{MAX_STEPS}")
        if self.samples <= 0:
            raise BudgetError(f"Sample budget must be positive, got {self.samples}")
        if self.grid < 0:
            raise BudgetError(f"Grid resolution must be non-negative, got {self.grid}")
        if self.workers < 1:
            raise BudgetError(f"Worker count must be positive, got {self.workers}")
        if self.chunk_size < 1:
            raise BudgetError(f"Chunk size must be positive, got {self.chunk_size}")

    def as_metadata(self) -> dict:
        return {
            "dim": self.d,
            "steps": self.steps,
            "samples": self.samples,
            "grid": self.grid,
            "seed": self.seed,
            "grid_pipelines": grid_size(self.grid) if self.grid else 0,
        }


@dataclass
class PipelineResult:
    source: str
    index: int
    negativity: float
    chsh: float


@dataclass
class ChunkResult:
    """Maxima over one chunk of pipelines."""

    chunk: int
    pipelines: int
    worst_negativity: PipelineResult
    worst_chsh: PipelineResult


@dataclass
class SearchSummary:
    budget: SearchBudget
    pipelines: int = 0
    max_negativity: float = 0.0
    max_chsh: float = 0.0
    worst_negativity: Optional[PipelineResult] = None
    worst_chsh: Optional[PipelineResult] = None
    chunks: List[int] = field(default_factory=list)


def run_pipeline(pipeline: Pipeline) -> HybridState:
    state = pipeline.initial
    for step in pipeline.steps:
        state = apply_step(state, step)
    return state


def evaluate_pipeline(pipeline: Pipeline) -> PipelineResult:
    rho = final_ab_state(run_pipeline(pipeline))
    return PipelineResult(
        source=pipeline.source,
        index=pipeline.index,
        negativity=negativity(rho),
        chsh=chsh_max(rho),
    )


def _reduce_chunk(chunk: int, results: Sequence[PipelineResult]) -> ChunkResult:
    return ChunkResult(
        chunk=chunk,
        pipelines=len(results),
        worst_negativity=max(results, key=lambda r: r.negativity),
        worst_chsh=max(results, key=lambda r: r.chsh),
    )


class SearchAggregator:
    """Folds chunk results, strictly in chunk order, into a SearchSummary."""

    def __init__(
        self,
        budget: SearchBudget,
        emit_callback: Optional[Callable[[ChunkResult], None]] = None,
    ):
        """Initialize aggregator.

        Args:
            budget: Budget the search runs under, copied into the summary.
            emit_callback: Callback invoked after every folded chunk.
        """
        self.summary = SearchSummary(budget=budget)
        self.emit_callback = emit_callback
        self._pending: dict[int, ChunkResult] = {}
        self._next_chunk = 0

    def add(self, result: ChunkResult):
        """Buffer a chunk and fold every chunk that is now in order."""
        self._pending[result.chunk] = result
        while self._next_chunk in self._pending:
            self._fold(self._pending.pop(self._next_chunk))
            self._next_chunk += 1

    def _fold(self, result: ChunkResult):
        summary = self.summary
        summary.pipelines += result.pipelines
        summary.chunks.append(result.chunk)
        if summary.worst_negativity is None or (
            result.worst_negativity.negativity > summary.max_negativity
        ):
            summary.worst_negativity = result.worst_negativity
            summary.max_negativity = result.worst_negativity.negativity
        if summary.worst_chsh is None or result.worst_chsh.chsh > summary.max_chsh:
            summary.worst_chsh = result.worst_chsh
            summary.max_chsh = result.worst_chsh.chsh
        if self.emit_callback:
            self.emit_callback(result)

    def flush(self) -> SearchSummary:
        if self._pending:
            missing = sorted(self._pending)
            raise RuntimeError(f"Chunks {missing} arrived without their predecessors")
        return self.summary


def _grid_chunk(budget: SearchBudget, chunk: int, start: int) -> ChunkResult:
    pipelines = grid_pipelines(
        budget.d, budget.grid, budget.steps, start, start + budget.chunk_size
    )
    return _reduce_chunk(chunk, [evaluate_pipeline(p) for p in pipelines])


def _sample_chunk(
    budget: SearchBudget, chunk: int, seed: np.random.SeedSequence, start: int
) -> ChunkResult:
    rng = np.random.default_rng(seed)
    count = min(budget.chunk_size, budget.samples - start)
    results = [
        evaluate_pipeline(random_pipeline(rng, budget.d, budget.steps, start + k))
        for k in range(count)
    ]
    return _reduce_chunk(chunk, results)


def search_classical_protocols(
    d: int = 2,
    grid: int = 4,
    samples: int = 10000,
    seed: int = 7,
    steps: int = 2,
    workers: int = 1,
    chunk_size: int = 500,
    emit_callback: Optional[Callable[[ChunkResult], None]] = None,
) -> SearchSummary:
    """Maximum negativity and CHSH over grid and sampled classical pipelines."""
    budget = SearchBudget(
        d=d,
        steps=steps,
        samples=samples,
        grid=grid,
        seed=seed,
        workers=workers,
        chunk_size=chunk_size,
    )
    grid_count = grid_size(grid) if grid else 0
    grid_starts = list(range(0, grid_count, chunk_size))
    sample_starts = list(range(0, samples, chunk_size))
    seeds = np.random.SeedSequence(seed).spawn(len(sample_starts))
    logger.info(
        "Searching d=%d steps=%d: %d grid pipelines, %d samples in %d chunks",
        d,
        steps,
        grid_count,
        samples,
        len(grid_starts) + len(sample_starts),
    )

    aggregator = SearchAggregator(budget, emit_callback)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_grid_chunk, budget, chunk, start)
            for chunk, start in enumerate(grid_starts)
        ]
        offset = len(futures)
        futures += [
            pool.submit(_sample_chunk, budget, offset + k, seeds[k], start)
            for k, start in enumerate(sample_starts)
        ]
        for future in futures:
            aggregator.add(future.result())
    summary = aggregator.flush()
    logger.info(
        "Search done: %d pipelines, max negativity %.3e, max CHSH %.6f",
        summary.pipelines,
        summary.max_negativity,
        summary.max_chsh,
    )
    return summary
