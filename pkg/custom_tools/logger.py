"""
Console logger and structured run log for the lab.

Console lines are colored with colorama and carry the caller location.
Structured events (solver stats, epoch records, skipped batches) go to
JSON-lines sinks that commands attach for the duration of a run.
"""

import inspect
import json
import os
from contextlib import contextmanager
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from colorama import Fore, Style, Back, init

# Initialize colorama for Windows compatibility
init(autoreset=True)


class LogLevel(Enum):
    """Log levels with their colors; SUCCESS sits between INFO and WARNING."""
    DEBUG = 10
    INFO = 20
    SUCCESS = 25
    WARNING = 30
    ERROR = 40
    CRITICAL = 50

    @property
    def color(self) -> str:
        color_map = {
            LogLevel.DEBUG: Fore.CYAN,
            LogLevel.INFO: Fore.GREEN,
            LogLevel.SUCCESS: Fore.GREEN + Style.BRIGHT,
            LogLevel.WARNING: Fore.YELLOW,
            LogLevel.ERROR: Fore.RED,
            LogLevel.CRITICAL: Fore.RED + Back.WHITE,
        }
        return color_map.get(self, Fore.BLUE)

    @classmethod
    def parse(cls, level: Any) -> 'LogLevel':
        if isinstance(level, LogLevel):
            return level
        try:
            return cls[str(level).upper()]
        except KeyError:
            return cls.INFO


class LoggerConfig:
    """Configuration for the console side of the logger."""

    def __init__(self,
                 show_caller: bool = True,
                 show_timestamp: bool = True,
                 timestamp_format: str = '%Y-%m-%d %H:%M:%S',
                 color_output: bool = True,
                 level: LogLevel = LogLevel.INFO):
        self.show_caller = show_caller
        self.show_timestamp = show_timestamp
        self.timestamp_format = timestamp_format
        self.color_output = color_output
        self.level = level

    def should_log(self, level: LogLevel) -> bool:
        return level.value >= self.level.value


class LogFormatter:
    """Formats console lines: `file:line:func | time | [LEVEL] | message`."""

    def __init__(self, config: LoggerConfig):
        self.config = config

    def format_message(self,
                       message: Any,
                       level: LogLevel,
                       caller_info: Optional[str] = None,
                       timestamp: Optional[str] = None) -> str:
        parts = []
        color = self.config.color_output

        if self.config.show_caller and caller_info:
            parts.append(f"{Fore.YELLOW}{caller_info}{Style.RESET_ALL}" if color else caller_info)

        if self.config.show_timestamp and timestamp:
            parts.append(f"{Fore.WHITE}{timestamp}{Style.RESET_ALL}" if color else timestamp)

        if color:
            parts.append(f"{level.color}[{level.name}]{Style.RESET_ALL}")
            parts.append(f"{level.color}{message}{Style.RESET_ALL}")
        else:
            parts.append(f"[{level.name}]")
            parts.append(str(message))

        return " | ".join(part for part in parts if part)


class ConsoleLogHandler:
    """Writes formatted lines to the console."""

    def handle(self, formatted_message: str, level: LogLevel) -> None:
        print(formatted_message)


class JsonLinesSink:
    """Appends one JSON object per event to a file."""

    def __init__(self, path: os.PathLike):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._stream = open(self.path, 'a', encoding='utf-8')

    def write(self, record: Dict[str, Any]) -> None:
        self._stream.write(json.dumps(record, sort_keys=True, default=_to_json) + "\n")
        self._stream.flush()

    def close(self) -> None:
        self._stream.close()


def _to_json(value: Any) -> Any:
    """Make numpy scalars and arrays serialisable."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def _caller_info() -> Optional[str]:
    """Return `file:line:Class.func` of the first frame outside this module."""
    frame = inspect.currentframe()
    try:
        while frame is not None:
            filename = os.path.basename(frame.f_code.co_filename)
            if filename != 'logger.py':
                parts = [filename, str(frame.f_lineno)]
                func_name = frame.f_code.co_name
                owner = frame.f_locals.get('self')
                if owner is not None and func_name != '<module>':
                    parts.append(f"{owner.__class__.__name__}.{func_name}")
                elif func_name != '<module>':
                    parts.append(func_name)
                return ':'.join(parts)
            frame = frame.f_back
    finally:
        del frame
    return None


class CustomLogger:
    """
    Console logger plus structured event fan-out.

    `log` prints a formatted line if the level passes the threshold.
    `event` writes a JSON record to every attached sink regardless of level
    and echoes a short DEBUG line to the console.
    """

    _instance = None

    def __init__(self, config: Optional[LoggerConfig] = None, handler: Optional[ConsoleLogHandler] = None):
        self.config = config or LoggerConfig()
        self.handler = handler or ConsoleLogHandler()
        self.formatter = LogFormatter(self.config)
        self.sinks: List[JsonLinesSink] = []

    def log(self, message: Any, level: LogLevel = LogLevel.INFO) -> None:
        if not self.config.should_log(level):
            return
        caller_info = _caller_info() if self.config.show_caller else None
        timestamp = datetime.now().strftime(self.config.timestamp_format) if self.config.show_timestamp else None
        self.handler.handle(self.formatter.format_message(message, level, caller_info, timestamp), level)

    def event(self, name: str, **fields: Any) -> None:
        record = {'event': name, **fields}
        for sink in self.sinks:
            sink.write(record)
        if self.config.should_log(LogLevel.DEBUG):
            self.log(f"{name}: {json.dumps(fields, sort_keys=True, default=_to_json)}", LogLevel.DEBUG)

    def attach(self, sink: JsonLinesSink) -> None:
        self.sinks.append(sink)

    def detach(self, sink: JsonLinesSink) -> None:
        if sink in self.sinks:
            self.sinks.remove(sink)
        sink.close()

    def debug(self, message: Any) -> None:
        self.log(message, LogLevel.DEBUG)

    def info(self, message: Any) -> None:
        self.log(message, LogLevel.INFO)

    def success(self, message: Any) -> None:
        self.log(message, LogLevel.SUCCESS)

    def warning(self, message: Any) -> None:
        self.log(message, LogLevel.WARNING)

    def error(self, message: Any) -> None:
        self.log(message, LogLevel.ERROR)

    def critical(self, message: Any) -> None:
        self.log(message, LogLevel.CRITICAL)

    @classmethod
    def get_instance(cls) -> 'CustomLogger':
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance

    @classmethod
    def configure(cls, config: LoggerConfig) -> None:
        """Swap the console config in place; attached sinks survive."""
        instance = cls.get_instance()
        instance.config = config
        instance.formatter = LogFormatter(config)


def configure_from_settings() -> None:
    """Apply WNLL_LOG_LEVEL / WNLL_LOG_COLOR from Django settings."""
    from django.conf import settings

    CustomLogger.configure(LoggerConfig(
        level=LogLevel.parse(getattr(settings, 'WNLL_LOG_LEVEL', 'INFO')),
        color_output=getattr(settings, 'WNLL_LOG_COLOR', True),
    ))


@contextmanager
def log_to_jsonl(path: os.PathLike):
    """Attach a JSON-lines sink for the duration of the block."""
    sink = JsonLinesSink(path)
    logger = CustomLogger.get_instance()
    logger.attach(sink)
    try:
        yield sink
    finally:
        logger.detach(sink)


# Module-level shortcuts used across the apps

def custom_logger(message: Any, level: Any = "INFO") -> None:
    """Log `message` at `level` (a LogLevel or its name)."""
    CustomLogger.get_instance().log(message, LogLevel.parse(level))


def record_event(name: str, **fields: Any) -> None:
    """Emit a structured event to the run log."""
    CustomLogger.get_instance().event(name, **fields)


def debug(message: Any) -> None:
    CustomLogger.get_instance().debug(message)


def info(message: Any) -> None:
    CustomLogger.get_instance().info(message)


def warning(message: Any) -> None:
    CustomLogger.get_instance().warning(message)


def error(message: Any) -> None:
    CustomLogger.get_instance().error(message)


def success(message: Any) -> None:
    CustomLogger.get_instance().success(message)


def critical(message: Any) -> None:
    CustomLogger.get_instance().critical(message)
