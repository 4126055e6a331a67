"""Tests for batch_processor module."""

import json
import threading
from pathlib import Path

import pytest

from cubic_prf_lib.batch_processor import (
    CheckpointManager,
    PartitionConfig,
    PartitionProgress,
    PartitionRunner,
    chunk,
)

pytestmark = pytest.mark.batch


def _partitions(n):
    return [(f"p{i:03d}", i) for i in range(n)]


def _add(acc, part):
    return acc + part


class TestPartitionProgress:
    """Tests for PartitionProgress dataclass and properties."""

    def test_is_complete_true(self):
        progress = PartitionProgress(total_partitions=2, results={"a": 1, "b": 2})
        assert progress.is_complete is True

    def test_is_complete_false(self):
        progress = PartitionProgress(total_partitions=2, results={"a": 1})
        assert progress.is_complete is False

    def test_percent_complete_zero_total(self):
        """An empty run is already complete."""
        assert PartitionProgress(total_partitions=0).percent_complete == 100.0

    def test_percent_complete_partial(self):
        progress = PartitionProgress(total_partitions=4, results={"a": 1})
        assert progress.percent_complete == 25.0

    def test_done_keys_sorted(self):
        progress = PartitionProgress(total_partitions=3, results={"b": 1, "a": 2})
        assert progress.done_keys == ["a", "b"]


class TestPartitionConfig:
    """Tests for PartitionConfig clamping."""

    def test_default_values(self):
        config = PartitionConfig()
        assert config.partition_size == 32
        assert config.threads == 1
        assert config.enable_checkpoints is False

    def test_partition_size_clamp_min(self):
        assert PartitionConfig(partition_size=0).partition_size == 1

    def test_threads_clamp(self):
        assert PartitionConfig(threads=0).threads == 1
        assert PartitionConfig(threads=1000).threads == 64

    def test_default_checkpoint_dir(self):
        config = PartitionConfig()
        assert config.checkpoint_dir == str(Path.home() / ".cubicprf" / "checkpoints")


class TestCheckpointManager:
    """Tests for CheckpointManager."""

    def test_init_creates_directory(self, tmp_path):
        checkpoint_dir = tmp_path / "checkpoints"
        CheckpointManager(str(checkpoint_dir), "census-7-brute")
        assert checkpoint_dir.is_dir()

    def test_exists_false(self, tmp_path):
        assert not CheckpointManager(str(tmp_path), "op").exists()

    def test_save_and_load(self, tmp_path):
        manager = CheckpointManager(str(tmp_path), "op")
        progress = PartitionProgress(total_partitions=3, started_at="now", results={"a": {"pairs": 4}})
        manager.save(progress)

        assert manager.exists()
        assert manager.checkpoint_file.name == "op.checkpoint.json"
        loaded = manager.load()
        assert loaded.total_partitions == 3
        assert loaded.results == {"a": {"pairs": 4}}
        assert loaded.updated_at

    def test_save_leaves_no_temp_file(self, tmp_path):
        manager = CheckpointManager(str(tmp_path), "op")
        manager.save(PartitionProgress(total_partitions=1))
        assert [p.name for p in tmp_path.iterdir()] == ["op.checkpoint.json"]

    def test_load_returns_none_when_missing(self, tmp_path):
        assert CheckpointManager(str(tmp_path), "op").load() is None

    def test_load_returns_none_on_invalid_json(self, tmp_path):
        manager = CheckpointManager(str(tmp_path), "op")
        manager.checkpoint_file.write_text("{broken")
        assert manager.load() is None

    def test_load_returns_none_on_unknown_fields(self, tmp_path):
        manager = CheckpointManager(str(tmp_path), "op")
        manager.checkpoint_file.write_text(json.dumps({"bogus": 1}))
        assert manager.load() is None

    def test_clear_removes_file(self, tmp_path):
        manager = CheckpointManager(str(tmp_path), "op")
        manager.save(PartitionProgress(total_partitions=1))
        manager.clear()
        assert not manager.exists()

    def test_clear_no_error_when_missing(self, tmp_path):
        CheckpointManager(str(tmp_path), "op").clear()


class TestPartitionRunner:
    """Tests for PartitionRunner."""

    def test_sequential_run(self):
        assert PartitionRunner().run(_partitions(10), work=lambda x: x * x, merge=_add, initial=0) == 285

    def test_threaded_run_matches_sequential(self):
        partitions = _partitions(50)
        sequential = PartitionRunner(PartitionConfig(threads=1)).run(
            partitions, work=lambda x: [x], merge=_add, initial=[])
        threaded = PartitionRunner(PartitionConfig(threads=4)).run(
            partitions, work=lambda x: [x], merge=_add, initial=[])
        assert threaded == sequential == list(range(50))

    def test_threaded_run_uses_pool(self):
        seen = set()

        def work(x):
            seen.add(threading.get_ident())
            return x

        PartitionRunner(PartitionConfig(threads=2)).run(_partitions(8), work=work, merge=_add, initial=0)
        assert threading.get_ident() not in seen

    def test_progress_callback(self):
        calls = []
        runner = PartitionRunner(progress_callback=lambda p: calls.append(p.percent_complete))
        runner.run(_partitions(4), work=lambda x: x, merge=_add, initial=0)
        assert calls == [25.0, 50.0, 75.0, 100.0]

    def test_empty_partitions(self):
        assert PartitionRunner().run([], work=lambda x: x, merge=_add, initial=7) == 7

    def test_checkpoint_cleared_on_completion(self, tmp_path):
        config = PartitionConfig(enable_checkpoints=True, checkpoint_dir=str(tmp_path), operation_id="op")
        PartitionRunner(config).run(_partitions(3), work=lambda x: x, merge=_add, initial=0)
        assert not CheckpointManager(str(tmp_path), "op").exists()

    def test_resume_skips_done_partitions(self, tmp_path):
        partitions = _partitions(4)
        manager = CheckpointManager(str(tmp_path), "op")
        manager.save(PartitionProgress(
            total_partitions=4,
            operation_id="op",
            partition_keys=[key for key, _ in partitions],
            results={"p000": 100, "p001": 200},
        ))

        done = []

        def work(x):
            done.append(x)
            return x

        config = PartitionConfig(enable_checkpoints=True, checkpoint_dir=str(tmp_path), operation_id="op")
        total = PartitionRunner(config).run(partitions, work=work, merge=_add, initial=0)
        assert sorted(done) == [2, 3]
        assert total == 100 + 200 + 2 + 3

    def test_resume_false_recomputes(self, tmp_path):
        manager = CheckpointManager(str(tmp_path), "op")
        manager.save(PartitionProgress(
            total_partitions=2, operation_id="op", partition_keys=["p000", "p001"], results={"p000": 100},
        ))
        config = PartitionConfig(enable_checkpoints=True, checkpoint_dir=str(tmp_path), operation_id="op")
        total = PartitionRunner(config).run(_partitions(2), work=lambda x: x, merge=_add, initial=0, resume=False)
        assert total == 1

    def test_checkpoint_for_other_layout_is_ignored(self, tmp_path):
        manager = CheckpointManager(str(tmp_path), "op")
        manager.save(PartitionProgress(total_partitions=9, operation_id="op", results={"p000": 100}))
        config = PartitionConfig(enable_checkpoints=True, checkpoint_dir=str(tmp_path), operation_id="op")
        total = PartitionRunner(config).run(_partitions(2), work=lambda x: x, merge=_add, initial=0)
        assert total == 1

    def test_checkpoint_with_same_count_but_other_keys_is_ignored(self, tmp_path):
        manager = CheckpointManager(str(tmp_path), "op")
        manager.save(PartitionProgress(
            total_partitions=2, operation_id="op", partition_keys=["33:000000", "33:000016"],
            results={"33:000000": 100},
        ))
        config = PartitionConfig(enable_checkpoints=True, checkpoint_dir=str(tmp_path), operation_id="op")
        total = PartitionRunner(config).run(_partitions(2), work=lambda x: x, merge=_add, initial=0)
        assert total == 1

    def test_checkpoint_of_other_operation_is_ignored(self, tmp_path):
        keys = ["p000", "p001"]
        manager = CheckpointManager(str(tmp_path), "op")
        manager.save(PartitionProgress(
            total_partitions=2, operation_id="census-7-brute", partition_keys=keys, results={"p000": 100},
        ))
        config = PartitionConfig(enable_checkpoints=True, checkpoint_dir=str(tmp_path), operation_id="op")
        total = PartitionRunner(config).run(_partitions(2), work=lambda x: x, merge=_add, initial=0)
        assert total == 1

    def test_checkpoint_without_keys_is_ignored(self, tmp_path):
        manager = CheckpointManager(str(tmp_path), "op")
        manager.save(PartitionProgress(total_partitions=2, results={"p000": 100}))
        config = PartitionConfig(enable_checkpoints=True, checkpoint_dir=str(tmp_path), operation_id="op")
        total = PartitionRunner(config).run(_partitions(2), work=lambda x: x, merge=_add, initial=0)
        assert total == 1

    def test_interrupted_run_leaves_checkpoint(self, tmp_path):
        config = PartitionConfig(enable_checkpoints=True, checkpoint_dir=str(tmp_path), operation_id="op")

        def work(x):
            if x == 2:
                raise KeyboardInterrupt
            return x

        with pytest.raises(KeyboardInterrupt):
            PartitionRunner(config).run(_partitions(4), work=work, merge=_add, initial=0)
        saved = CheckpointManager(str(tmp_path), "op").load()
        assert saved.done_keys == ["p000", "p001"]
        assert saved.operation_id == "op"
        assert saved.partition_keys == ["p000", "p001", "p002", "p003"]

        resumed = []

        def finish(x):
            resumed.append(x)
            return x

        total = PartitionRunner(config).run(_partitions(4), work=finish, merge=_add, initial=0)
        assert resumed == [2, 3]
        assert total == 6


class TestChunk:
    def test_chunk_range(self):
        assert [list(c) for c in chunk(range(5), 2)] == [[0, 1], [2, 3], [4]]

    def test_chunk_empty(self):
        assert chunk([], 3) == []
