"""
Partitioned execution for census runs.

Provides:
- Partition configuration with clamped limits
- Checkpoint/resume of partial per-partition results
- Sequential or thread-pool execution with progress callbacks
- Merging in partition-key order, so the thread count never changes results
"""

from __future__ import annotations

import json
import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Generic, Optional, TypeVar

logger = logging.getLogger(__name__)

P = TypeVar("P")
R = TypeVar("R")


@dataclass
class PartitionProgress:
    """Tracks progress of a partitioned run."""

    total_partitions: int = 0
    operation_id: str = ""
    partition_keys: list[str] = field(default_factory=list)
    started_at: str = ""
    updated_at: str = ""
    results: dict[str, Any] = field(default_factory=dict)

    @property
    def done_keys(self) -> list[str]:
        return sorted(self.results)

    @property
    def is_complete(self) -> bool:
        return len(self.results) >= self.total_partitions

    @property
    def percent_complete(self) -> float:
        if self.total_partitions == 0:
            return 100.0
        return len(self.results) / self.total_partitions * 100


@dataclass
class PartitionConfig:
    """Configuration for partitioned runs."""

    partition_size: int = 32
    threads: int = 1
    enable_checkpoints: bool = False
    checkpoint_dir: Optional[str] = None
    operation_id: Optional[str] = None

    def __post_init__(self):
        self.partition_size = max(1, self.partition_size)
        self.threads = max(1, min(self.threads, 64))
        if self.checkpoint_dir is None:
            self.checkpoint_dir = str(Path.home() / ".cubicprf" / "checkpoints")


class CheckpointManager:
    """Stores the partial results of one operation as JSON."""

    def __init__(self, checkpoint_dir: str, operation_id: str):
        self.checkpoint_dir = Path(checkpoint_dir)
        self.checkpoint_dir.mkdir(parents=True, exist_ok=True)
        self.operation_id = operation_id
        self.checkpoint_file = self.checkpoint_dir / f"{operation_id}.checkpoint.json"

    def save(self, progress: PartitionProgress) -> None:
        progress.updated_at = datetime.now().isoformat()
        # temp file then rename, so a crash never leaves half a checkpoint
        temp_file = self.checkpoint_file.with_suffix(".tmp")
        with open(temp_file, "w") as f:
            json.dump(asdict(progress), f, indent=2, sort_keys=True)
        temp_file.replace(self.checkpoint_file)

    def load(self) -> Optional[PartitionProgress]:
        if not self.checkpoint_file.exists():
            return None
        try:
            with open(self.checkpoint_file) as f:
                data = json.load(f)
            return PartitionProgress(**data)
        except (json.JSONDecodeError, TypeError, KeyError):
            logger.warning("ignoring unreadable checkpoint %s", self.checkpoint_file)
            return None

    def clear(self) -> None:
        if self.checkpoint_file.exists():
            self.checkpoint_file.unlink()

    def exists(self) -> bool:
        return self.checkpoint_file.exists()


class PartitionRunner(Generic[P, R]):
    """
    Runs ``work`` over keyed partitions and folds the results with ``merge``.

    ``work`` results must be JSON-serializable when checkpoints are enabled.

    Usage:
        runner = PartitionRunner(PartitionConfig(threads=4))
        total = runner.run(partitions, work=count_block, merge=add_counts, initial={})
    """

    def __init__(
        self,
        config: Optional[PartitionConfig] = None,
        progress_callback: Optional[Callable[[PartitionProgress], None]] = None,
    ):
        self.config = config or PartitionConfig()
        self.progress_callback = progress_callback

    def run(
        self,
        partitions: Sequence[tuple[str, P]],
        work: Callable[[P], R],
        merge: Callable[[R, R], R],
        initial: R,
        resume: bool = True,
    ) -> R:
        keys = [key for key, _ in partitions]
        progress = PartitionProgress(
            total_partitions=len(partitions),
            operation_id=self.config.operation_id or "",
            partition_keys=keys,
            started_at=datetime.now().isoformat(),
        )

        checkpoint_mgr = None
        if self.config.enable_checkpoints and self.config.operation_id:
            checkpoint_mgr = CheckpointManager(self.config.checkpoint_dir or ".checkpoints", self.config.operation_id)
            if resume and checkpoint_mgr.exists():
                saved = checkpoint_mgr.load()
                if saved and self._matches(saved, keys):
                    progress = saved
                    logger.info("resuming %s at %.0f%%", self.config.operation_id, progress.percent_complete)
                elif saved:
                    logger.warning("discarding checkpoint %s: it belongs to a different run", checkpoint_mgr.checkpoint_file)

        pending = [(key, payload) for key, payload in partitions if key not in progress.results]

        def record(key: str, result: R) -> None:
            progress.results[key] = result
            if checkpoint_mgr:
                checkpoint_mgr.save(progress)
            if self.progress_callback:
                self.progress_callback(progress)
            logger.debug("partition %s done (%d/%d)", key, len(progress.results), progress.total_partitions)

        if self.config.threads == 1 or len(pending) <= 1:
            for key, payload in pending:
                record(key, work(payload))
        else:
            with ThreadPoolExecutor(max_workers=self.config.threads) as pool:
                futures = {pool.submit(work, payload): key for key, payload in pending}
                for future in as_completed(futures):
                    record(futures[future], future.result())

        total = initial
        for key, _ in partitions:
            total = merge(total, progress.results[key])

        if checkpoint_mgr and progress.is_complete:
            checkpoint_mgr.clear()
        return total

    def _matches(self, saved: PartitionProgress, keys: list[str]) -> bool:
        """A checkpoint resumes only the same operation over the same partition keys."""
        return (
            saved.operation_id == self.config.operation_id
            and saved.partition_keys == keys
            and set(saved.results) <= set(keys)
        )


def chunk(items: Sequence[P], size: int) -> list[Sequence[P]]:
    """Split items into consecutive slices of at most ``size`` entries."""
    return [items[i : i + size] for i in range(0, len(items), size)]
