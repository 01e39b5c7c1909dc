"""
Logs debug, info, warning, error and critical messages to the console and to file.
"""

import inspect
import logging
import pathlib
import sys

from ..read_yaml import read_yaml


# Repository root config
CONFIG_FILE_PATH = pathlib.Path(__file__).resolve().parents[2] / "config.yaml"


class Logger:
    """
    Wrapper around a named standard library logger.

    Every process (main or worker) owns exactly one instance, named after the process.
    """

    __create_key = object()

    @classmethod
    def create(
        cls, name: str, enable_log_to_file: bool
    ) -> "tuple[True, Logger] | tuple[False, None]":
        """
        Create a logger.

        Parameters:
            name: Name of the logger, usually `f"{worker_name}_{process_id}"`.
            enable_log_to_file: Also write into the most recent run directory.

        Returns:
            A tuple containing success status and the Logger object (or None on failure).
        """
        if not name:
            return False, None

        result, config = read_yaml.open_config(CONFIG_FILE_PATH)
        if not result:
            config = {}

        logger_config = config.get("logger", {})
        log_format = logger_config.get("format", "%(asctime)s: [%(levelname)s] %(message)s")
        datetime_format = logger_config.get("datetime_format", "%H:%M:%S")

        logger = logging.getLogger(name)
        logger.setLevel(logging.DEBUG)
        logger.propagate = False
        formatter = logging.Formatter(fmt=log_format, datefmt=datetime_format)

        # Handlers survive across create() calls with the same name
        if not logger.handlers:
            stream_handler = logging.StreamHandler(sys.stdout)
            stream_handler.setLevel(logging.INFO)
            stream_handler.setFormatter(formatter)
            logger.addHandler(stream_handler)

            if enable_log_to_file:
                log_directory = Logger.latest_run_directory(
                    pathlib.Path(logger_config.get("directory_path", "logs"))
                )
                if log_directory is not None:
                    file_handler = logging.FileHandler(
                        log_directory / f"{name}.log", mode="w", encoding="utf-8"
                    )
                    file_handler.setLevel(logging.DEBUG)
                    file_handler.setFormatter(formatter)
                    logger.addHandler(file_handler)

        return True, Logger(cls.__create_key, logger)

    def __init__(self, class_private_create_key: object, logger: logging.Logger) -> None:
        """
        Private constructor, use create() method.
        """
        assert class_private_create_key is Logger.__create_key, "Use create() method"

        self.logger = logger

    @staticmethod
    def latest_run_directory(directory_path: pathlib.Path) -> "pathlib.Path | None":
        """
        Most recently created run directory under the log root, or None if there is none.
        """
        if not directory_path.is_dir():
            return None

        runs = sorted(path for path in directory_path.iterdir() if path.is_dir())
        if len(runs) == 0:
            return None

        return runs[-1]

    @staticmethod
    def message_and_metadata(message: str, frame: "inspect.FrameInfo | None") -> str:
        """
        Prefix the message with the caller's file, function and line.
        """
        if frame is None:
            return message

        filename = pathlib.Path(frame.filename).name
        return f"[{filename} | {frame.function} | {frame.lineno}] {message}"

    def __caller(self, log_with_frame_info: bool) -> "inspect.FrameInfo | None":
        if not log_with_frame_info:
            return None

        stack = inspect.stack()
        # 0 is this function, 1 is the logging method, 2 is the caller
        if len(stack) < 3:
            return None

        return stack[2]

    def debug(self, message: str, log_with_frame_info: bool = True) -> None:
        """
        Logs a debug level message.
        """
        frame = self.__caller(log_with_frame_info)
        self.logger.debug(self.message_and_metadata(message, frame))

    def info(self, message: str, log_with_frame_info: bool = True) -> None:
        """
        Logs an info level message.
        """
        frame = self.__caller(log_with_frame_info)
        self.logger.info(self.message_and_metadata(message, frame))

    def warning(self, message: str, log_with_frame_info: bool = True) -> None:
        """
        Logs a warning level message.
        """
        frame = self.__caller(log_with_frame_info)
        self.logger.warning(self.message_and_metadata(message, frame))

    def error(self, message: str, log_with_frame_info: bool = True) -> None:
        """
        Logs an error level message.
        """
        frame = self.__caller(log_with_frame_info)
        self.logger.error(self.message_and_metadata(message, frame))

    def critical(self, message: str, log_with_frame_info: bool = True) -> None:
        """
        Logs a critical level message.
        """
        frame = self.__caller(log_with_frame_info)
        self.logger.critical(self.message_and_metadata(message, frame))
