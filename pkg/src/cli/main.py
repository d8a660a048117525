"""
Command-line entry point.

    python -m src.cli.main session.txt [--json] [--field fp:5] [--order lex]
    python -m src.cli.main < session.txt

Exit codes: 0 on success, 1 on a domain error, 2 on a syntax error. The
results of the statements before a failing one are printed before the
error line.
"""

import argparse
import sys
from typing import List, Optional

from src.algebra.errors import PolySyntaxError, ToolkitError
from src.algebra.poly import CoeffField
from src.cli.runner import RunOptions, SessionRunner, render_results
from src.cli.session import SessionSyntaxError, parse_session
from src.config.settings import settings
from src.utils.logging import get_logger, set_level

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formal-models",
        description="Run a session of admissible blow-up and generic-fiber computations",
    )
    parser.add_argument("session", nargs="?", help="session file (default: stdin)")
    parser.add_argument("--field", default=None, help="coefficient field: q or fp:<p>")
    parser.add_argument("--order", default=None, choices=["grevlex", "lex"], help="order used by gb")
    parser.add_argument("--degree-bound", type=int, default=None, help="normalization search bound")
    parser.add_argument("--uniformizer", default=None, help=f"uniformizer name (default {settings.UNIFORMIZER_NAME})")
    parser.add_argument("--json", action="store_true", help="emit versioned JSON documents")
    parser.add_argument("--verbose", action="store_true", help="log progress to stderr")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        set_level("INFO")

    try:
        if args.session:
            with open(args.session, encoding="utf-8") as handle:
                text = handle.read()
        else:
            text = sys.stdin.read()
    except OSError as e:
        print(f"error[IOError]: {e}", file=sys.stderr)
        return 1

    try:
        options = RunOptions.from_settings(
            field=CoeffField.parse(args.field) if args.field else None,
            order_name=args.order,
            degree_bound=args.degree_bound,
            uniformizer=args.uniformizer,
        )
        session = parse_session(text, options.uniformizer)
    except (SessionSyntaxError, PolySyntaxError) as e:
        print(f"error[{e.code}]: {e}", file=sys.stderr)
        return 2
    except ToolkitError as e:
        print(f"error[{e.code}]: {e}", file=sys.stderr)
        return 1

    runner = SessionRunner(options)
    results = []
    failure, status = None, 0
    try:
        for statement in session.statements:
            results.append(runner.run(statement))
    except (SessionSyntaxError, PolySyntaxError) as e:
        failure, status = e, 2
    except ToolkitError as e:
        failure, status = e, 1

    # statements that completed before a failure are still reported
    sys.stdout.write(render_results(results, as_json=args.json))
    if failure is not None:
        print(f"error[{failure.code}]: {failure}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
