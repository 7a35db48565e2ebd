"""Interfejs wiersza poleceń: przebiegi, przemiatania i zestawy weryfikacyjne."""

from __future__ import annotations

import sys
from argparse import ArgumentParser, Namespace, RawDescriptionHelpFormatter
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

import structlog
from pydantic import ValidationError

from poisson_eigenpath.experiments import (
    RUN_CSV_FIELDS,
    SUITE_CHOICES,
    SWEEP_AXES,
    SWEEP_CSV_FIELDS,
    ExperimentConfig,
    SuiteOptions,
    load_config,
    run_experiment,
    sweep,
    verify,
    write_outputs,
    write_sweep,
    write_verification,
)
from poisson_eigenpath.shared import (
    InstanceError,
    NumericalError,
    RuntimeSettings,
    bind_run_context,
    configure_logging,
    write_error_report,
)

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

_EPILOG = f"""\
Kody wyjścia:
  0  sukces
  1  zestaw weryfikacyjny zgłosił naruszenia
  2  niepoprawna konfiguracja lub instancja (nic nie zostaje zapisane)
  3  błąd numeryczny albo naruszone ograniczenie niewierności

Kolumny CSV:
  run    {{stem}}_fidelity.csv         {", ".join(RUN_CSV_FIELDS)}
  sweep  {{stem}}_sweep_{{axis}}.csv   {", ".join(SWEEP_CSV_FIELDS)}

Puste pole CSV oznacza wartość nieokreśloną (np. czas dla przebiegu skokowego).
"""


def _add_experiment_arguments(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        required=True,
        help="Plik konfiguracji JSON albo preset w postaci preset:<nazwa>",
    )
    parser.add_argument(
        "--out",
        type=Path,
        help="Katalog wynikowy (nadpisuje outputs.directory)",
    )
    parser.add_argument(
        "--seed",
        type=int,
        help="Ziarno główne dla trajektorii (nadpisuje execution.master_seed)",
    )
    parser.add_argument(
        "--threads",
        type=int,
        help="Liczba wątków roboczych (nadpisuje execution.threads i zmienną środowiskową)",
    )
    parser.add_argument(
        "--set",
        action="append",
        dest="overrides",
        default=[],
        metavar="KLUCZ=JSON",
        help=(
            "Nadpisuje pole konfiguracji ścieżką z kropkami (można podać wielokrotnie). "
            "Przykład: --set schedule.epsilon=0.05 --set instance.N=32"
        ),
    )
    parser.add_argument(
        "--allow-violations",
        action="store_true",
        help="Nie kończy z kodem 3, gdy zmierzona niewierność przekracza ograniczenie",
    )


def _parse_values(text: str) -> list[float]:
    return [float(item) for item in text.split(",") if item.strip()]


def _build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="poisson-eigenpath",
        description="Symulacja przechodzenia po ścieżkach własnych z losowymi czasami kroków.",
        epilog=_EPILOG,
        formatter_class=RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--verbose",
        action="store_true",
        help="Wyświetla szczegółowe logi",
    )
    parser.add_argument(
        "--log-json",
        action="store_true",
        help="Logi jako linie JSON na stderr",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser(
        "run",
        help="Pojedynczy przebieg z raportem ograniczenia",
        epilog=_EPILOG,
        formatter_class=RawDescriptionHelpFormatter,
    )
    _add_experiment_arguments(run)

    sweep_parser = commands.add_parser(
        "sweep",
        help="Przebiegi dla kolejnych wartości jednej osi parametrów",
        epilog=_EPILOG,
        formatter_class=RawDescriptionHelpFormatter,
    )
    _add_experiment_arguments(sweep_parser)
    sweep_parser.add_argument(
        "--axis",
        required=True,
        choices=SWEEP_AXES,
        help="Oś przemiatania",
    )
    sweep_parser.add_argument(
        "--values",
        required=True,
        type=_parse_values,
        help="Wartości osi rozdzielone przecinkami, np. 8,16,32,64",
    )

    verify_parser = commands.add_parser(
        "verify",
        help="Zestawy kontroli numerycznych z raportem naruszeń",
        epilog=_EPILOG,
        formatter_class=RawDescriptionHelpFormatter,
    )
    verify_parser.add_argument(
        "--suite",
        choices=SUITE_CHOICES,
        default="all",
        help="Zestaw do uruchomienia (domyślnie: all)",
    )
    verify_parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="Ziarno zestawów (domyślnie: 0)",
    )
    verify_parser.add_argument(
        "--out",
        type=Path,
        default=Path("results"),
        help="Katalog raportu weryfikacji (domyślnie: results)",
    )
    verify_parser.add_argument(
        "--quick",
        action="store_true",
        help="Mniejsze próbki i tylko instancja Grovera N=8 w zestawie ograniczeń",
    )
    return parser


def _settings(args: Namespace) -> RuntimeSettings:
    return RuntimeSettings.from_env().with_threads(getattr(args, "threads", None))


def _load(args: Namespace) -> ExperimentConfig:
    return load_config(
        args.config,
        overrides=args.overrides,
        seed=args.seed,
        threads=args.threads,
        out=args.out,
    )


def _guarded(args: Namespace, body: Callable[[], int]) -> int:
    source = getattr(args, "config", None)
    try:
        return body()
    except ValidationError as exc:
        for error in exc.errors():
            logger.error(
                "config-invalid",
                error_type="ValidationError",
                message=error.get("msg"),
                path=".".join(str(part) for part in error.get("loc", ())),
                source=source,
            )
        return EXIT_INVALID
    except InstanceError as exc:
        logger.error(
            "config-invalid",
            error_type=type(exc).__name__,
            message=str(exc),
            source=source,
        )
        return EXIT_INVALID
    except NumericalError as exc:
        context: dict[str, Any] = {"config": source, "overrides": getattr(args, "overrides", [])}
        if args.command == "sweep":
            context.update(axis=args.axis, values=args.values)
        report = write_error_report(exc, where=args.command, context=context)
        logger.error(
            "numerical-failure",
            error_type=type(exc).__name__,
            message=str(exc),
            report=str(report.path),
        )
        return EXIT_NUMERICAL


def _run_run(args: Namespace) -> int:
    config = _load(args)
    outcome = run_experiment(config, _settings(args))
    for path in write_outputs(outcome):
        print(path)
    if outcome.violated:
        logger.error(
            "bound-violated",
            measured=outcome.infidelity,
            bound=outcome.bound.bound_value,
            allowed=args.allow_violations,
        )
        if not args.allow_violations:
            return EXIT_NUMERICAL
    return EXIT_OK


def _run_sweep(args: Namespace) -> int:
    config = _load(args)
    result = sweep(config, args.axis, args.values, _settings(args))
    for path in write_sweep(result, config):
        print(path)
    violated = [row.value for row in result.rows if row.satisfied is False]
    if violated:
        logger.error(
            "bound-violated",
            axis=args.axis,
            values=violated,
            allowed=args.allow_violations,
        )
        if not args.allow_violations:
            return EXIT_NUMERICAL
    return EXIT_OK


def _run_verify(args: Namespace) -> int:
    options = SuiteOptions.reduced() if args.quick else SuiteOptions()
    report = verify(args.suite, args.seed, options)
    for path in write_verification(report, output_dir=args.out):
        print(path)
    if report.violations:
        logger.error("verification-failed", suite=args.suite, violations=report.violations)
        return EXIT_VERIFICATION_FAILED
    logger.info("verification-passed", suite=args.suite, seed=args.seed)
    return EXIT_OK


_COMMANDS: dict[str, Callable[[Namespace], int]] = {
    "run": _run_run,
    "sweep": _run_sweep,
    "verify": _run_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    configure_logging(level=10 if args.verbose else 20, json_output=args.log_json)
    bind_run_context(command=args.command, source=getattr(args, "config", None))
    handler = _COMMANDS[args.command]
    return _guarded(args, lambda: handler(args))


if __name__ == "__main__":
    sys.exit(main())
