"""
Logger setup for the main process.
"""

import datetime
import os
import pathlib

from . import logger


MAIN_LOGGER_NAME = "main"


def setup_main_logger(
    config: dict, main_logger_name: str = MAIN_LOGGER_NAME, enable_log_to_file: bool = True
) -> "tuple[True, logger.Logger, pathlib.Path] | tuple[False, None, None]":
    """
    Create the run directory and the main logger.

    Parameters:
        config: Decoded `config.yaml`.
        main_logger_name: Logger name.
        enable_log_to_file: Write the main log into the run directory.

    Returns:
        A tuple containing success status, the main logger and the run directory.
    """
    try:
        log_directory_path = pathlib.Path(config["logger"]["directory_path"])
        file_datetime_format = config["logger"]["file_datetime_format"]
    except KeyError as exception:
        print(f"ERROR: Config key(s) not found: {exception}")
        return False, None, None

    start_time = datetime.datetime.now().strftime(file_datetime_format)
    logging_path = log_directory_path / f"{start_time}_{os.getpid()}"

    try:
        logging_path.mkdir(parents=True, exist_ok=True)
    except OSError as exception:
        print(f"ERROR: Could not create log directory {logging_path}: {exception}")
        return False, None, None

    result, main_logger = logger.Logger.create(main_logger_name, enable_log_to_file)
    if not result:
        print("ERROR: Failed to create main logger")
        return False, None, None

    # Get Pylance to stop complaining
    assert main_logger is not None

    main_logger.info(f"Logging to {logging_path}", True)

    return True, main_logger, logging_path
