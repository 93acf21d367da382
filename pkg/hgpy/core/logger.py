"""
hgpy ./core/logger.py

Logging setup shared by the CLI process and trial worker processes.
Workers forward their records through a multiprocessing queue; the
parent process drains it with a QueueListener.

This program is free software: you can redistribute it and/or modify
it under the terms of the GNU General Public License as published by
the Free Software Foundation, either version 3 of the License, or
(at your option) any later version.
"""
import logging
import logging.handlers
import multiprocessing as mp
import sys
from typing import Union

_FORMAT = '%(levelname)-7s %(asctime)s %(name)-40s %(message)s'

_log_queue: Union[mp.Queue, None] = None
_listener: Union[logging.handlers.QueueListener, None] = None
_file_handler: Union[logging.Handler, None] = None


def _root() -> logging.Logger:
    return logging.getLogger('hgpy')


def setup_log_queue(log_queue):
    global _log_queue
    _log_queue = log_queue


def get_queue():
    global _log_queue
    return _log_queue


def setup_console(level: Union[str, int] = 'INFO') -> logging.Handler:
    """Attach a stderr handler to the package logger"""
    root = _root()
    root.setLevel(level)

    for h in root.handlers:
        if getattr(h, '_hgpy_console', False):
            h.setStream(sys.stderr)
            h.setLevel(level)
            return h

    h = logging.StreamHandler(sys.stderr)
    h.setFormatter(logging.Formatter(_FORMAT))
    h.setLevel(level)
    h._hgpy_console = True
    root.addHandler(h)
    return h


def setup_log_to_file(filepath) -> logging.Handler:
    global _file_handler
    if _file_handler is not None:
        remove_log_to_file(_file_handler)

    # Set file handler
    h = logging.handlers.TimedRotatingFileHandler(filepath, 'd')
    h.setFormatter(logging.Formatter(_FORMAT))
    _root().addHandler(h)
    _file_handler = h
    return h


def remove_log_to_file(h: logging.Handler):
    global _file_handler

    _root().removeHandler(h)
    h.close()
    if h is _file_handler:
        _file_handler = None


def start_queue_listener() -> mp.Queue:
    """Create the shared queue for worker processes and start draining it
    into the handlers of the package logger"""
    global _listener
    queue = mp.Queue() if _log_queue is None else _log_queue
    setup_log_queue(queue)

    if _listener is None:
        _listener = logging.handlers.QueueListener(queue, *_root().handlers, respect_handler_level=True)
        _listener.start()

    return queue


def stop_queue_listener():
    global _listener, _log_queue
    if _listener is not None:
        _listener.stop()
    _listener = None
    _log_queue = None


def getLogger(name) -> logging.Logger:
    log = logging.getLogger(name)

    return log


def add_handlers(level: Union[str, int] = logging.DEBUG):
    """Route the package logger of a worker process into the shared queue"""
    global _log_queue
    root = _root()

    if _log_queue is None:
        return

    # If handler is already set, skip
    if any(isinstance(h, logging.handlers.QueueHandler) for h in root.handlers):
        return

    # Important: forked workers inherit the parent's handlers
    for h in list(root.handlers):
        root.removeHandler(h)

    root.addHandler(logging.handlers.QueueHandler(_log_queue))
    root.setLevel(level)
    root.propagate = False
