"""
Worker that runs study levels taken from a queue.
"""

import os
import pathlib

from utilities.workers import queue_proxy_wrapper
from utilities.workers import worker_controller
from . import study
from . import study_config
from ..logger import logger


def study_worker(
    config: study_config.StudyConfig,
    input_queue: queue_proxy_wrapper.QueueProxyWrapper,
    output_queue: queue_proxy_wrapper.QueueProxyWrapper,
    controller: worker_controller.WorkerController,
) -> None:
    """
    Worker process that runs levels until it receives a sentinel or exit is requested.

    Parameters:
        config: Study shared by all levels.
        input_queue: LevelSpec objects followed by sentinels (None).
        output_queue: (level index, RunResult or None) pairs.
        controller: WorkerController for exit requests and failure reports.
    """
    # Instantiate logger
    worker_name = pathlib.Path(__file__).stem
    process_id = os.getpid()
    result, local_logger = logger.Logger.create(f"{worker_name}_{process_id}", True)
    if not result:
        print("ERROR: Worker failed to create logger")
        controller.report_failure()
        return

    # Get Pylance to stop complaining
    assert local_logger is not None

    local_logger.info("Logger initialized", True)

    # Main loop: do work.
    while not controller.is_exit_requested():
        result, level = input_queue.get_with_timeout()
        if not result:
            continue

        if level is None:
            break

        result, run = study.run_single(config, level, local_logger)
        if not result:
            local_logger.error(f"Level {level.index} failed")
            controller.report_failure()
            output_queue.queue.put((level.index, None))
            break

        output_queue.queue.put((level.index, run))

    local_logger.info("Study worker exiting")
