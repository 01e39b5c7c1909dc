"""
Pool of identical worker processes that consume one input queue.
"""

import multiprocessing as mp

from modules.logger import logger
from utilities.workers import queue_proxy_wrapper
from utilities.workers import worker_controller


class WorkerProperties:
    """
    Target, shared arguments and queues of a pool.

    The target is called as target(*work_arguments, input_queue, output_queue, controller).
    """

    __create_key = object()

    @classmethod
    def create(
        cls,
        count: int,
        target: "(...) -> object",  # type: ignore
        work_arguments: "tuple",
        input_queue: queue_proxy_wrapper.QueueProxyWrapper,
        output_queue: queue_proxy_wrapper.QueueProxyWrapper,
        controller: worker_controller.WorkerController,
        local_logger: logger.Logger,
    ) -> "tuple[True, WorkerProperties] | tuple[False, None]":
        """
        Falliable create (instantiation) method to create a WorkerProperties object.

        Parameters:
            count: Number of worker processes, at least 1.
            target: Worker function.
            work_arguments: Arguments shared by every worker, passed first.
            input_queue: Work items followed by one sentinel per worker.
            output_queue: Results put by the workers.
            controller: Exit and failure flags.
            local_logger: Logger of the calling process.

        Returns:
            A tuple containing success status and the WorkerProperties object (or None on failure).
        """
        if count <= 0:
            local_logger.error(f"Worker count must be positive, got {count}", True)
            return False, None

        return True, WorkerProperties(
            cls.__create_key,
            count,
            target,
            work_arguments,
            input_queue,
            output_queue,
            controller,
        )

    def __init__(
        self,
        class_private_create_key: object,
        count: int,
        target: "(...) -> object",  # type: ignore
        work_arguments: "tuple",
        input_queue: queue_proxy_wrapper.QueueProxyWrapper,
        output_queue: queue_proxy_wrapper.QueueProxyWrapper,
        controller: worker_controller.WorkerController,
    ) -> None:
        """
        Private constructor, use create() method.
        """
        assert class_private_create_key is WorkerProperties.__create_key, "Use create() method"

        self.count = count
        self.target = target
        self.work_arguments = work_arguments
        self.input_queue = input_queue
        self.output_queue = output_queue
        self.controller = controller

    @property
    def arguments(self) -> "tuple":
        """
        Full argument tuple of one worker process.
        """
        return self.work_arguments + (self.input_queue, self.output_queue, self.controller)

    @property
    def target_name(self) -> str:
        """
        Name of the worker function, for log messages.
        """
        return self.target.__name__


class WorkerManager:
    """
    Starts the pool, collects its results and joins it.
    """

    __create_key = object()

    @classmethod
    def create(
        cls,
        worker_properties: WorkerProperties,
        local_logger: logger.Logger,
    ) -> "tuple[True, WorkerManager] | tuple[False, None]":
        """
        Falliable create (instantiation) method to create a WorkerManager object.
        """
        workers = []
        for _ in range(worker_properties.count):
            try:
                worker = mp.Process(
                    target=worker_properties.target, args=worker_properties.arguments
                )
            # Catching all exceptions for library call
            # pylint: disable-next=broad-exception-caught
            except Exception as e:
                local_logger.error(f"Exception raised while creating a worker: {e}", True)
                return False, None

            workers.append(worker)

        return True, WorkerManager(cls.__create_key, workers, worker_properties, local_logger)

    def __init__(
        self,
        class_private_create_key: object,
        workers: "list[mp.Process]",
        worker_properties: WorkerProperties,
        local_logger: logger.Logger,
    ) -> None:
        """
        Private constructor, use create() method.
        """
        assert class_private_create_key is WorkerManager.__create_key, "Use create() method"

        self.__workers = workers
        self.__properties = worker_properties
        self.__local_logger = local_logger

    def start_workers(self) -> None:
        """
        Start every worker process.
        """
        for worker in self.__workers:
            worker.start()

    def any_alive(self) -> bool:
        """
        Whether at least one worker is still running.
        """
        return any(worker.is_alive() for worker in self.__workers)

    def collect(self, expected_count: int, poll_timeout: float) -> "list[object]":
        """
        Read results until expected_count arrived or every worker has stopped.

        Whatever is still queued after the workers stopped is included.
        """
        results = []
        while len(results) < expected_count:
            result, item = self.__properties.output_queue.get_with_timeout(poll_timeout)
            if result:
                results.append(item)
                continue

            if not self.any_alive():
                results.extend(self.__properties.output_queue.drain_queue())
                break

        return results

    def join_workers(self) -> None:
        """
        Join every worker and log any that exited abnormally.
        """
        for worker in self.__workers:
            worker.join()
            if worker.exitcode != 0:
                self.__local_logger.warning(
                    f"{self.__properties.target_name} {worker.name} "
                    f"exited with code {worker.exitcode}",
                    True,
                )
