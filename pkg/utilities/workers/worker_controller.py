"""
For controlling study workers.
"""

import multiprocessing as mp


class WorkerController:
    """
    For interprocess communication between a study and its workers.
    Contains the exit request and the failure flag, both set by a failing worker.
    """

    def __init__(self) -> None:
        """
        Constructor creates the shared events.
        """
        self.__exit = mp.Event()
        self.__failure = mp.Event()

    def is_exit_requested(self) -> bool:
        """
        Returns whether a failed level has stopped the study.
        A worker checks between levels, so a level in progress always finishes.
        """
        return self.__exit.is_set()

    def report_failure(self) -> None:
        """
        Called by a worker whose level failed; also requests exit.
        """
        self.__failure.set()
        self.__exit.set()

    def has_failed(self) -> bool:
        """
        Returns whether any worker reported a failed level.
        """
        return self.__failure.is_set()
