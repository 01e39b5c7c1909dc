"""
Queue.
"""

import multiprocessing.managers
import queue


class QueueProxyWrapper:
    """
    Wrapper for an underlying queue proxy which also stores `maxsize`.

    `maxsize <= 0` means infinite size.
    """

    __QUEUE_TIMEOUT = 0.1  # seconds

    def __init__(self, mp_manager: multiprocessing.managers.SyncManager, maxsize: int = 0) -> None:
        self.queue = mp_manager.Queue(maxsize)
        self.maxsize = maxsize

    def put_all(self, items: "list[object]") -> None:
        """
        Puts the items in order, blocking while the queue is full.
        """
        for item in items:
            self.queue.put(item)

    def fill_queue_with_sentinel(self, count: int) -> None:
        """
        Puts one sentinel (None) per consumer.
        """
        for _ in range(count):
            self.queue.put(None)

    def get_with_timeout(self, timeout: float = 0.0) -> "tuple[True, object] | tuple[False, None]":
        """
        Gets one item.

        timeout: Time waiting in seconds before giving up, must be greater than 0 .
        """
        if timeout <= 0.0:
            timeout = self.__QUEUE_TIMEOUT

        try:
            return True, self.queue.get(timeout=timeout)
        except queue.Empty:
            return False, None

    def drain_queue(self) -> "list[object]":
        """
        Removes and returns everything currently in the queue.
        """
        items = []
        while True:
            result, item = self.get_with_timeout()
            if not result:
                return items

            items.append(item)
