"""
Command-line front end: verify, dims and export
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .config import FORMATS, SUITES, SuiteConfig
from .core import ALGEBRAS, Workbench
from .errors import ConfigError, WorkbenchError
from .presentation import ClosedAlgebra

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

INSTANCE_FAMILIES = ('jimbo', 'bmw', 'identity')


class UsageParser(argparse.ArgumentParser):
    """ArgumentParser that raises ConfigError instead of exiting"""

    def error(self, message):
        raise ConfigError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--n', type=int, default=None, help='number of strands')
    parser.add_argument('--degree', type=int, default=None, help='cyclotomic degree d')
    parser.add_argument('--seed', type=int, default=None, help='random seed (falls back to $JUCYS_SEED)')
    parser.add_argument('--max-dim', type=int, default=None, dest='max_dim', help='abort closures beyond this size')
    parser.add_argument('--out', default=None, help='write output to this file instead of stdout')
    parser.add_argument('--config', default=None, help='key=value configuration file')
    parser.add_argument('--verbose', action='store_true', default=None, help='debug logging')


def build_parser() -> argparse.ArgumentParser:
    parser = UsageParser(prog='jucys-workbench', description='Exact verification suites for BMW, Hecke and '
                                                             'affine BMW algebras and q-KZ connections')
    commands = parser.add_subparsers(dest='command', parser_class=UsageParser)
    commands.required = True

    verify = commands.add_parser('verify', help='run a verification suite')
    verify.add_argument('--suite', choices=SUITES, default=None)
    verify.add_argument('--trials', type=int, default=None)
    verify.add_argument('--format', choices=FORMATS, default=None, dest='fmt')
    _add_common(verify)

    dims = commands.add_parser('dims', help='print closure dimensions for 1..n strands')
    dims.add_argument('--algebra', choices=ALGEBRAS, default='bmw')
    dims.add_argument('--only', action='store_true', help='print only the row for n strands')
    _add_common(dims)

    export = commands.add_parser('export', help='export structure constants, Hamiltonians or an R/K instance')
    export.add_argument('what', choices=('structure', 'hamiltonians', 'instance'))
    export.add_argument('--algebra', choices=ALGEBRAS, default='bmw')
    export.add_argument('--family', choices=INSTANCE_FAMILIES, default='jimbo')
    _add_common(export)
    return parser


def resolve_config(args: argparse.Namespace, env: Optional[Dict[str, str]] = None) -> SuiteConfig:
    file_text = None
    if args.config:
        try:
            file_text = Path(args.config).read_text(encoding='utf-8')
        except OSError as exc:
            raise ConfigError(f"Cannot read config file {args.config}: {exc}") from None
    flags: Dict[str, Any] = {key: getattr(args, key, None)
                             for key in ('suite', 'n', 'degree', 'trials', 'seed', 'max_dim', 'fmt', 'out', 'verbose')}
    if args.command != 'verify':
        # dims and export build algebras only; the suite field is irrelevant
        flags['suite'] = flags['suite'] or 'all'
    return SuiteConfig.resolve(flags, file_text, env)


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )


def emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding='utf-8')
        logger.info("Wrote %s", out)
    else:
        sys.stdout.write(text)


def run_verify(config: SuiteConfig) -> int:
    report = Workbench(config).run()
    emit(report.dumps() + '\n' if config.fmt == 'json' else report.render_text(), config.out)
    for failure in report.failures:
        logger.warning("FAIL %s (%s): %s", failure.id, failure.anchor, failure.witness)
    return EXIT_OK if report.ok else EXIT_FAILED


def run_dims(config: SuiteConfig, algebra: str, only: bool = False) -> int:
    emit(Workbench(config).dims_text(algebra, only), config.out)
    return EXIT_OK


def run_export(config: SuiteConfig, what: str, algebra: str, family: str) -> int:
    bench = Workbench(config)
    if what == 'structure':
        closed = bench.structure(algebra)
        data = closed.export()
        if not closed.same_tables(ClosedAlgebra.from_export(json.loads(json.dumps(data)))):
            logger.error("Structure export does not round-trip")
            return EXIT_FAILED
    elif what == 'hamiltonians':
        data = bench.export_hamiltonians()
    else:
        data = bench.export_instance(family)
    emit(json.dumps(data, indent=2, sort_keys=True, default=str) + '\n', config.out)
    return EXIT_OK


def main(argv: Optional[List[str]] = None, env: Optional[Dict[str, str]] = None) -> int:
    """
    Entry point of the jucys-workbench command

    Returns:
        0 when every check passes, 1 on a verification failure, 2 on a usage,
        configuration or structural error
    """
    try:
        args = build_parser().parse_args(argv)
        config = resolve_config(args, env)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    configure_logging(config.verbose)
    try:
        if args.command == 'verify':
            return run_verify(config)
        elif args.command == 'dims':
            return run_dims(config, args.algebra, args.only)
        else:
            return run_export(config, args.what, args.algebra, args.family)
    except (WorkbenchError, ValueError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
