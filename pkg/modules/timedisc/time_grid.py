"""
Partition of the time interval into slabs.
"""

import numpy as np


class TimeGrid:
    """
    Break points 0 = t_0 < ... < t_N = T and the polynomial degree in time.
    """

    __create_key = object()

    @classmethod
    def create(
        cls, breaks: "np.ndarray | list[float]", degree: int
    ) -> "tuple[True, TimeGrid] | tuple[False, None]":
        """
        Falliable create (instantiation) method to create a TimeGrid object.

        Parameters:
            breaks: Strictly increasing slab end points, at least two.
            degree: Polynomial degree in time (ell >= 0).

        Returns:
            A tuple containing success status and the TimeGrid object (or None on failure).
        """
        breaks = np.asarray(breaks, dtype=float)
        if breaks.ndim != 1 or len(breaks) < 2:
            return False, None

        if not np.all(np.diff(breaks) > 0.0):
            return False, None

        if degree < 0:
            return False, None

        return True, TimeGrid(cls.__create_key, breaks, degree)

    @classmethod
    def uniform(
        cls, final_time: float, slab_count: int, degree: int
    ) -> "tuple[True, TimeGrid] | tuple[False, None]":
        """
        Uniform grid on [0, final_time] with slab_count slabs.
        """
        if final_time <= 0.0 or slab_count < 1:
            return False, None

        return cls.create(np.linspace(0.0, final_time, slab_count + 1), degree)

    def __init__(self, class_private_create_key: object, breaks: np.ndarray, degree: int) -> None:
        """
        Private constructor, use create() method.
        """
        assert class_private_create_key is TimeGrid.__create_key, "Use create() method"

        self.breaks = breaks
        self.degree = degree
        self.steps = np.diff(breaks)

    @property
    def slab_count(self) -> int:
        """
        Number of slabs N.
        """
        return len(self.steps)

    @property
    def final_time(self) -> float:
        """
        T = t_N.
        """
        return float(self.breaks[-1])

    @property
    def max_step(self) -> float:
        """
        Largest slab length.
        """
        return float(self.steps.max())

    @property
    def step_ratio(self) -> float:
        """
        eta = max over n >= 2 of tau_n / tau_(n-1); 1 for a single slab.
        """
        if self.slab_count < 2:
            return 1.0

        return float(np.max(self.steps[1:] / self.steps[:-1]))

    def slab_of(self, time: float) -> int:
        """
        1-based index of the slab (t_(n-1), t_n] containing time; t = 0 belongs to slab 1.
        """
        index = int(np.searchsorted(self.breaks, time, side="left"))
        return min(max(index, 1), self.slab_count)
