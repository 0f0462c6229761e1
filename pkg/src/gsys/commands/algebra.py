"""Built-in matrix, completion and enumeration commands."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

from ..cobongartz import CompletionRequest, CompletionResult, complete
from ..core import Workbench
from ..explorer import ExchangeGraph, enumerate_graph, to_gcollection
from ..gsystem import VerificationReport, verify_gsystem
from ..laurent import ClusterFormulaReport, LaurentSeed, check_cluster_formula, laurent_seed_at
from ..matrix import ExchangeMatrix, MatrixSeed, apply_sequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Trace:
    """Every seed along a mutation sequence, optionally with its cluster."""

    seeds: tuple[MatrixSeed, ...]
    clusters: tuple[LaurentSeed, ...] | None = None

    def to_dict(self) -> dict[str, Any]:
        steps = []
        for index, seed in enumerate(self.seeds):
            step: dict[str, Any] = {"seed": seed.to_dict()}
            if self.clusters is not None:
                step["cluster"] = self.clusters[index].texts()
            steps.append(step)
        return {"steps": steps}


def register_algebra_commands(workbench: Workbench) -> None:
    """Register matrix-pattern, completion and exchange-graph commands."""

    def trace(wb: Workbench, b0: ExchangeMatrix, seq: Sequence[int], with_cluster: bool = False) -> Trace:
        """Mutate (B0, I, I) along SEQ and return every intermediate seed."""
        seeds = apply_sequence(b0, seq)
        clusters = None
        if with_cluster:
            clusters = tuple(laurent_seed_at(b0, seq[:i]) for i in range(len(seq) + 1))
        return Trace(seeds, clusters)

    def complete_cluster(
        wb: Workbench,
        b0: ExchangeMatrix,
        seq: Sequence[int],
        u: Sequence[int],
        with_cluster: bool = False,
    ) -> CompletionResult:
        """Co-Bongartz completion of the cluster reached by SEQ at initial positions U."""
        return complete(CompletionRequest(b0, tuple(seq), frozenset(u)), with_cluster=with_cluster)

    def enumerate_seeds(wb: Workbench, b0: ExchangeMatrix, directions: Sequence[int] | None = None) -> ExchangeGraph:
        """Enumerate the exchange graph of B0 within the configured caps."""
        return enumerate_graph(b0, wb.settings.max_nodes, wb.settings.max_depth, directions)

    def verify(wb: Workbench, b0: ExchangeMatrix) -> VerificationReport:
        """Check the mutation, completion and uniqueness conditions on all g-vector clusters of B0."""
        graph = enumerate_seeds(wb, b0)
        report = verify_gsystem(to_gcollection(graph))
        logger.info("verified %d clusters: %s", len(graph), "pass" if report.passed else "fail")
        return report

    def cluster_formula(wb: Workbench, b0: ExchangeMatrix, seq: Sequence[int]) -> ClusterFormulaReport:
        """Check det H = ±1 and the B-transport identity at seeded random points."""
        seed = laurent_seed_at(b0, seq)
        return check_cluster_formula(seed, b0, wb.rng(), wb.settings.samples)

    workbench.command("trace", trace, source_kind="builtin")
    workbench.command("complete", complete_cluster, source_kind="builtin")
    workbench.command("enumerate", enumerate_seeds, source_kind="builtin")
    workbench.command("verify", verify, source_kind="builtin")
    workbench.command("cluster-formula", cluster_formula, source_kind="builtin")
