"""Tests for the worker pool helper."""

import pytest

from tusv.services.pool import run_tasks


class TestRunTasks:
    """Tests for ordered fan-out."""

    def test_inline(self):
        assert run_tasks(abs, [-3, 2, -1], jobs=1) == [3, 2, 1]

    def test_pool_keeps_order(self):
        tasks = list(range(-50, 50))
        assert run_tasks(abs, tasks, jobs=3, chunksize=4) == [abs(t) for t in tasks]

    def test_empty(self):
        assert run_tasks(abs, [], jobs=4) == []

    def test_jobs_must_be_positive(self):
        with pytest.raises(ValueError):
            run_tasks(abs, [1], jobs=0)
