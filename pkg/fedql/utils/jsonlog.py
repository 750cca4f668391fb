#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
JSON Lines Handler

A logging handler that writes one JSON object per record, so federator
metrics and request logs can be consumed by line-oriented tooling.
"""

import json
import logging
import os
import sys
import threading
from datetime import datetime, timezone
from typing import Optional

LOG_LEVEL_ENV = "FEDQL_LOG_LEVEL"
LOG_FILE_ENV = "FEDQL_LOG_FILE"

# LogRecord attributes that are not user supplied `extra` fields.
_RESERVED = set(vars(logging.makeLogRecord({}))) | {"message", "asctime"}


class JsonLinesHandler(logging.Handler):
    """
    A logging handler that appends records to a file as JSON lines.

    Each line holds ts, level, logger and message, plus every field passed
    through `extra=` (for example remote_calls or service_latency_ms).
    """

    def __init__(self, filename: str, mode: str = "a", encoding: str = "utf-8"):
        """
        Initialize the handler with file path and options.

        Args:
            filename: Path to the log file
            mode: File open mode (default: 'a' for append)
            encoding: File encoding (default: 'utf-8')
        """
        super().__init__()
        self.filename = os.path.abspath(filename)
        self.mode = mode
        self.encoding = encoding
        self.file_handle = None
        self._lock = threading.Lock()

        self._open_file()

    def _open_file(self):
        try:
            self.file_handle = open(self.filename, self.mode, encoding=self.encoding)
        except Exception as e:
            raise IOError(f"Failed to open log file {self.filename}: {e}")

    def to_json(self, record: logging.LogRecord) -> str:
        payload = {
            "ts": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        for key, value in record.__dict__.items():
            if key not in _RESERVED and not key.startswith("_"):
                payload[key] = value
        if record.exc_info:
            payload["exc"] = logging.Formatter().formatException(record.exc_info)
        return json.dumps(payload, default=str, ensure_ascii=False)

    def emit(self, record: logging.LogRecord):
        """
        Write a log record as one JSON line.

        Args:
            record: LogRecord to be written
        """
        with self._lock:
            try:
                line = self.to_json(record) + "\n"
                if self.file_handle is None or self.file_handle.closed:
                    self._open_file()
                self.file_handle.write(line)
                self.file_handle.flush()
            except Exception:
                self.handleError(record)

    def get_file_path(self) -> str:
        return self.filename

    def close(self):
        """Close the file handler."""
        with self._lock:
            if self.file_handle and not self.file_handle.closed:
                self.file_handle.close()
        super().close()


def configure_logging(level: Optional[str] = None, json_file: Optional[str] = None) -> logging.Logger:
    """
    Configure the fedql logger tree.

    Args:
        level: Level name; defaults to $FEDQL_LOG_LEVEL, then INFO
        json_file: Optional JSON-lines sink; defaults to $FEDQL_LOG_FILE

    Returns:
        logging.Logger: The configured "fedql" logger
    """
    level = (level or os.environ.get(LOG_LEVEL_ENV) or "INFO").upper()
    json_file = json_file or os.environ.get(LOG_FILE_ENV)

    logger = logging.getLogger("fedql")
    logger.setLevel(level)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))
    logger.addHandler(console)

    if json_file:
        logger.addHandler(JsonLinesHandler(json_file))
    return logger
