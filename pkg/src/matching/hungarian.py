"""
Minimum-cost one-to-one assignment with a deterministic tie-break.

scipy's linear_sum_assignment finds an optimum, but when several assignments
share the optimal cost it may return any of them. Rewards and metrics must not
depend on that choice, so hungarian() returns the lexicographically smallest
optimal assignment: rows are fixed in order, each to the smallest column that
still admits an optimal completion.
"""

import logging
from typing import Sequence, Union

import numpy as np
import numpy.typing as npt
from scipy.optimize import linear_sum_assignment

logger = logging.getLogger(__name__)

CostMatrix = Union[npt.NDArray[np.float64], Sequence[Sequence[float]]]
Assignment = list[tuple[int, int]]

# Relative tolerance when comparing partial sums against the optimum
TIE_TOLERANCE = 1e-9


def _optimal_cost(matrix: npt.NDArray[np.float64]) -> float:
    if matrix.size == 0:
        return 0.0
    rows, cols = linear_sum_assignment(matrix)
    return float(matrix[rows, cols].sum())


def _smallest_optimal_columns(matrix: npt.NDArray[np.float64]) -> list[int]:
    """For a matrix with rows <= cols, the smallest column sequence among optima."""
    n_rows, n_cols = matrix.shape
    best = _optimal_cost(matrix)
    tol = TIE_TOLERANCE * max(1.0, abs(best))
    free = list(range(n_cols))
    chosen: list[int] = []
    spent = 0.0
    for row in range(n_rows):
        rest_rows = np.arange(row + 1, n_rows)
        for col in free:
            rest_cols = [c for c in free if c != col]
            rest = matrix[np.ix_(rest_rows, rest_cols)] if rest_rows.size else np.zeros((0, 0))
            total = spent + matrix[row, col] + _optimal_cost(rest)
            if total <= best + tol:
                chosen.append(col)
                spent += matrix[row, col]
                free.remove(col)
                break
        else:  # pragma: no cover - the optimal column always qualifies
            raise RuntimeError("No optimal completion found; cost matrix is inconsistent")
    return chosen


def hungarian(cost: CostMatrix) -> Assignment:
    """
    Solve the linear assignment problem.

    Args:
        cost: A rectangular matrix of finite costs (rows x cols).

    Returns:
        Sorted (row, col) pairs, min(rows, cols) of them, with minimal total
        cost. Ties resolve to the lexicographically smallest sequence of
        assigned indices along the shorter side. An empty matrix yields [].

    Raises:
        ValueError: If the matrix is not two-dimensional or has non-finite entries.
    """
    matrix = np.asarray(cost, dtype=np.float64)
    if matrix.size == 0:
        return []
    if matrix.ndim != 2:
        raise ValueError(f"Cost matrix must be 2-D, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("Cost matrix has non-finite entries")

    if matrix.shape[0] <= matrix.shape[1]:
        cols = _smallest_optimal_columns(matrix)
        pairs = [(row, col) for row, col in enumerate(cols)]
    else:
        rows = _smallest_optimal_columns(matrix.T)
        pairs = sorted((row, col) for col, row in enumerate(rows))
    logger.debug("Assigned %d pair(s) for a %dx%d cost matrix", len(pairs), *matrix.shape)
    return pairs


def assignment_cost(cost: CostMatrix, pairs: Assignment) -> float:
    """Total cost of an assignment."""
    matrix = np.asarray(cost, dtype=np.float64)
    return float(sum(matrix[r, c] for r, c in pairs))
