import pytest

from keuler.guard import DEFAULT_MAX_CELL_DIM, SizeGuardError, cell_dim_limit, check_dim, max_cell_dim
from keuler.linalg import RMatrix


def test_default(monkeypatch):
    monkeypatch.delenv("WITTEN_MAX_CELL_DIM", raising=False)
    assert max_cell_dim() == DEFAULT_MAX_CELL_DIM == 200_000


def test_env_override(monkeypatch):
    monkeypatch.setenv("WITTEN_MAX_CELL_DIM", "12")
    assert max_cell_dim() == 12
    with pytest.raises(SizeGuardError):
        RMatrix.zeros(13, 1)
    with cell_dim_limit(50):
        assert check_dim(40) == 40
    assert max_cell_dim() == 12


def test_context_restores():
    with cell_dim_limit(3):
        with pytest.raises(SizeGuardError, match="above the limit 3"):
            check_dim(4, "thing")
    assert check_dim(4) == 4
