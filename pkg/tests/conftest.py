"""Pytest configuration and fixtures."""

import os
import tempfile
from pathlib import Path

import pytest

# Set test environment BEFORE importing tusv modules
os.environ["TUSV_CACHE_DIR"] = tempfile.mkdtemp(prefix="tusv-test-cache-")
os.environ["TUSV_JOBS"] = "1"
os.environ["TUSV_SCAN_BOUND"] = "20000"
os.environ["TUSV_LOG_LEVEL"] = "WARNING"


@pytest.fixture
def cache_dir(tmp_path) -> Path:
    """Empty per-test mask cache directory."""
    path = tmp_path / "masks"
    path.mkdir()
    return path


@pytest.fixture
def brute_force():
    """Values in [0, bound] of a form, by enumerating every variable triple."""
    from tusv.core.generators import Domain, Kind, evaluate, min_value

    def values(form, bound: int, z_max: int = 80) -> set[int]:
        slack = -sum(min_value(g) for g in form.terms)
        per_term = []
        for g in form.terms:
            if g.kind.kind == Kind.ZERO:
                per_term.append([0])
                continue
            zs = range(-z_max, z_max + 1) if g.domain == Domain.INTEGERS else range(z_max + 1)
            per_term.append(sorted({v for v in (evaluate(g, z) for z in zs) if v <= bound + slack}))
        first, second, third = per_term
        return {
            u + v + w
            for u in first
            for v in second
            for w in third
            if 0 <= u + v + w <= bound
        }

    return values
