"""
Sparse direct solve with residual check.
"""

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from ..logger import logger


# Iterative refinement steps after the factorization
REFINEMENT_STEPS = 3


def linear_solve(
    matrix: scipy.sparse.spmatrix,
    right_hand_side: np.ndarray,
    tolerance: float = 1.0e-12,
    local_logger: "logger.Logger | None" = None,
) -> "tuple[True, np.ndarray] | tuple[False, None]":
    """
    Solve with a sparse LU factorization and a few refinement steps.

    Fails on a singular factorization, on non-finite values and on a relative residual that
    is still above tolerance after refinement.
    """
    try:
        factorization = scipy.sparse.linalg.splu(scipy.sparse.csc_matrix(matrix))
        solution = factorization.solve(right_hand_side)
    # Catching all exceptions for library call
    # pylint: disable-next=broad-exception-caught
    except Exception as e:
        if local_logger is not None:
            local_logger.error(f"Sparse factorization failed: {e}")
        return False, None

    if not np.all(np.isfinite(solution)):
        if local_logger is not None:
            local_logger.error("Sparse solve produced non-finite values")
        return False, None

    scale = max(float(np.linalg.norm(right_hand_side)), 1.0e-300)
    residual = right_hand_side - matrix @ solution
    relative = float(np.linalg.norm(residual)) / scale
    for _ in range(REFINEMENT_STEPS):
        if relative <= tolerance:
            break
        solution = solution + factorization.solve(residual)
        residual = right_hand_side - matrix @ solution
        relative = float(np.linalg.norm(residual)) / scale

    if relative > tolerance:
        if local_logger is not None:
            local_logger.error(f"Linear solve residual {relative} above tolerance {tolerance}")
        return False, None

    if local_logger is not None:
        local_logger.debug(f"Linear solve relative residual: {relative}", False)

    return True, solution
