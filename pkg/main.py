#!/usr/bin/env python3
import argparse
import logging
import sys

from typing import List, Optional

import commands
import render_functions
import settings

from exceptions import RhoKitError

LOGGER = logging.getLogger(__name__)

def _add_knot_source(parser: argparse.ArgumentParser) -> None:
	parser.add_argument("--knot", help="registry name, e.g. trefoil, twist(-2), mirror(trefoil)")
	parser.add_argument("--matrix-file", help="CSV or JSON Seifert matrix, '-' for stdin")
	parser.add_argument("--matrix-json", help='inline JSON {"name": ..., "matrix": [[...]]}')

def _add_expr_source(parser: argparse.ArgumentParser) -> None:
	parser.add_argument("--dsl", help='e.g. trivial(2) |> infect([x1,x2], knot:"trefoil")')
	parser.add_argument("--expr-file", help="DSL or JSON expression file, '-' for stdin")

def _add_family_options(parser: argparse.ArgumentParser, n_default: int) -> None:
	parser.add_argument("--n", type=int, default=n_default, help="curve depth")
	parser.add_argument("--m", type=int, default=2, help="number of link components")
	parser.add_argument("--knots", nargs="+", help="registry names; default: Arf 0 twist knot sums")
	parser.add_argument("--count", type=int, default=5, help="number of default knots")

def build_parser() -> argparse.ArgumentParser:
	common = argparse.ArgumentParser(add_help=False)
	common.add_argument("--format", choices=["json", "csv", "text"], default="json")
	common.add_argument("--tolerance", type=float, default=None, help="rho0 error bound target")
	common.add_argument("--max-n", type=int, default=None, help="largest derived depth considered")
	common.add_argument("--verbose", action="store_true", help="debug logging on stderr")

	parser = argparse.ArgumentParser(prog="rhokit", description="rho-invariants of links at desk scale")
	sub = parser.add_subparsers(dest="command", required=True)

	_add_knot_source(sub.add_parser("knot-info", parents=[common], help="Alexander polynomial, Arf, circle roots"))

	sigfn = sub.add_parser("sigfn", parents=[common], help="Levine-Tristram signature function")
	_add_knot_source(sigfn)
	sigfn.add_argument("--samples", type=int, default=1000, help="rows of the CSV sampler")

	_add_knot_source(sub.add_parser("rho0", parents=[common], help="integral of the signature function"))

	depth = sub.add_parser("depth", parents=[common], help="derived series depth of a word")
	depth.add_argument("--word", required=True)
	depth.add_argument("--rank", type=int, default=None)

	_add_expr_source(sub.add_parser("eval", parents=[common], help="rho vector of an expression"))

	bing = sub.add_parser("bing", parents=[common], help="iterated Bing double of a knot")
	_add_knot_source(bing)
	bing.add_argument("--pattern", default="[1,2]", help='commutator tree such as "[[1,2],[3,4]]"')

	_add_family_options(sub.add_parser("family", parents=[common], help="members of S_eta"), 1)

	approx = sub.add_parser("approx", parents=[common], help="approximate a rho0 target")
	approx.add_argument("--target", required=True)
	approx.add_argument("--epsilon", default="0.01")
	approx.add_argument("--library", help="JSON library file; default: built-in twist knots")
	approx.add_argument("--budget", type=int, default=settings.COEFFICIENT_BUDGET)

	independence = sub.add_parser("independence", parents=[common], help="bounded integer relation search")
	_add_family_options(independence, 2)
	independence.add_argument("--bound", type=int, default=20)
	independence.add_argument("--tau", default="1e-6")

	audit = sub.add_parser("audit", parents=[common], help="vanishing audit")
	_add_expr_source(audit)
	_add_family_options(audit, 0)
	return parser

def main(argv: Optional[List[str]] = None) -> int:
	args = build_parser().parse_args(argv)
	logging.basicConfig(
		level=logging.DEBUG if args.verbose else logging.WARNING,
		format=settings.LOG_FORMAT,
		stream=sys.stderr,
	)
	try:
		command = commands.COMMANDS[args.command](args)
		output = command.render(command.perform())
	except RhoKitError as error:
		sys.stderr.write(render_functions.render_json(error.to_json()))
		return error.exit_code
	except Exception as error:
		LOGGER.debug("unexpected failure in %s", args.command, exc_info=True)
		internal = RhoKitError(f"Internal error: {error}")
		sys.stderr.write(render_functions.render_json(internal.to_json()))
		return internal.exit_code
	sys.stdout.write(output)
	return 0

if __name__ == "__main__":
	sys.exit(main())
