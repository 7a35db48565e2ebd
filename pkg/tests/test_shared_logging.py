"""Unit tests for shared logging configuration."""

from __future__ import annotations

import logging
import sys
from unittest.mock import patch

import structlog

from poisson_eigenpath.shared.logging import bind_run_context, configure_logging


def test_configure_logging_calls_structlog_and_basicconfig() -> None:
    with (
        patch("poisson_eigenpath.shared.logging.logging.basicConfig") as basic_config,
        patch("poisson_eigenpath.shared.logging.structlog.configure") as configure,
    ):
        configure_logging(level=logging.DEBUG)

    basic_config.assert_called_once()
    assert basic_config.call_args.kwargs["level"] == logging.DEBUG
    assert basic_config.call_args.kwargs["force"] is True
    configure.assert_called_once()


def test_logs_go_to_stderr_through_processor_formatter() -> None:
    with (
        patch("poisson_eigenpath.shared.logging.logging.basicConfig") as basic_config,
        patch("poisson_eigenpath.shared.logging.structlog.configure"),
    ):
        configure_logging(json_output=True)

    (handler,) = basic_config.call_args.kwargs["handlers"]
    assert handler.stream is sys.stderr
    assert isinstance(handler.formatter, structlog.stdlib.ProcessorFormatter)


def test_bind_run_context_replaces_previous_values() -> None:
    with (
        patch("poisson_eigenpath.shared.logging.structlog.contextvars.clear_contextvars") as clear,
        patch("poisson_eigenpath.shared.logging.structlog.contextvars.bind_contextvars") as bind,
    ):
        bind_run_context(command="run", source="preset:grover-trotter")

    clear.assert_called_once()
    bind.assert_called_once_with(command="run", source="preset:grover-trotter")
