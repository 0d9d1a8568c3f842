from __future__ import annotations

import argparse
import logging
import math

from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Type

import knot_factories
import render_functions
import settings

from certificates import independence_certificate
from exceptions import EngineInconsistency, ParseError, PreconditionError
from families import (
	approximate_target,
	arf_zero_twist_sums,
	bing_double,
	canonical_curve,
	generate_family,
)
from filtration import check_vanishing, infer_tags
from freegroup import parse_word
from inputs import load_expr, load_knot, load_library
from provenance import ProvenanceLog
from rho_engine import RhoEngine
from seifert import SeifertMatrix, alexander_polynomial, arf
from signature import circle_roots, rho0, signature_function
from solvable import derived_depth
from verdicts import OutputFormat

LOGGER = logging.getLogger(__name__)

class Command:
	"""
	One subcommand. The constructor validates the whole request; `perform`
	computes and returns a JSON-ready payload.
	"""

	csv_header: Optional[Tuple[str, ...]] = None

	def __init__(self, args: argparse.Namespace):
		self.args = args
		self.output = OutputFormat(args.format)
		if self.output is OutputFormat.CSV and self.csv_header is None:
			raise PreconditionError(f"{args.command} has no CSV output.")
		self.tolerance = args.tolerance if args.tolerance is not None else settings.DEFAULT_TOLERANCE
		if not (math.isfinite(self.tolerance) and self.tolerance > 0):
			raise PreconditionError(f"--tolerance must be a positive finite number, got {self.tolerance}.")
		self.max_n = args.max_n if args.max_n is not None else settings.DEFAULT_MAX_DEPTH
		if not 0 <= self.max_n <= settings.MAX_DEPTH_LIMIT:
			raise PreconditionError(f"--max-n must be between 0 and {settings.MAX_DEPTH_LIMIT}, got {self.max_n}.")
		self.notes: Optional[ProvenanceLog] = None

	def perform(self) -> Dict[str, Any]:
		"""
		Run this command. This method must be overwritten by Command subclasses.
		"""
		raise NotImplementedError()

	def csv_rows(self) -> List[Sequence[Any]]:
		return []

	def render(self, payload: Dict[str, Any]) -> str:
		rows = self.csv_rows() if self.output is OutputFormat.CSV else None
		return render_functions.render(payload, self.output, self.csv_header, rows, self.notes)

	def engine(self) -> RhoEngine:
		engine = RhoEngine(self.max_n, self.tolerance)
		self.notes = engine.provenance
		return engine

class KnotCommand(Command):
	"""A command about one knot, given by --knot, --matrix-file or --matrix-json."""

	def __init__(self, args: argparse.Namespace):
		super().__init__(args)
		self.knot = load_knot(args.knot, args.matrix_file, args.matrix_json)

class KnotInfoCommand(KnotCommand):
	def perform(self) -> Dict[str, Any]:
		poly = alexander_polynomial(self.knot)
		return {
			"knot": self.knot.to_json(),
			"genus": self.knot.genus,
			"alexander": [int(c) for c in poly.all_coeffs()],
			"arf": arf(self.knot),
			"circle_roots": [bp.to_json() for bp in circle_roots(self.knot)],
		}

class SignatureFunctionCommand(KnotCommand):
	csv_header = ("t", "sigma")

	def __init__(self, args: argparse.Namespace):
		super().__init__(args)
		if args.samples < 1:
			raise PreconditionError(f"--samples must be at least 1, got {args.samples}.")

	def perform(self) -> Dict[str, Any]:
		self.function = signature_function(self.knot, self.tolerance)
		payload = self.function.to_json()
		payload["knot"] = self.knot.label
		return payload

	def csv_rows(self) -> List[Sequence[Any]]:
		return [
			(f"{angle:.6f}", "" if value is None else value)
			for angle, value in self.function.sample(self.args.samples)
		]

class Rho0Command(KnotCommand):
	def perform(self) -> Dict[str, Any]:
		return {"knot": self.knot.label, "rho0": rho0(self.knot, self.tolerance).to_json()}

class DepthCommand(Command):
	def __init__(self, args: argparse.Namespace):
		super().__init__(args)
		self.word = parse_word(args.word, args.rank)

	def perform(self) -> Dict[str, Any]:
		return {
			"word": str(self.word),
			"rank": self.word.rank,
			"depth": derived_depth(self.word, self.max_n).to_json(),
		}

class EvalCommand(Command):
	def __init__(self, args: argparse.Namespace):
		super().__init__(args)
		self.expr = load_expr(args.dsl, args.expr_file, self.max_n)

	def perform(self) -> Dict[str, Any]:
		engine = self.engine()
		vector = engine.rho_vector(self.expr)
		return {
			"expression": str(self.expr),
			"rho_vector": vector.to_json(),
			"slice_obstruction": engine.slice_obstruction(self.expr).to_json(),
		}

class BingCommand(KnotCommand):
	def perform(self) -> Dict[str, Any]:
		bing = bing_double(self.knot, self.args.pattern, self.max_n)
		engine = self.engine()
		payload = bing.to_json()
		payload["rho_vector"] = engine.rho_vector(bing.expr).to_json()
		payload["slice_obstruction"] = engine.slice_obstruction(bing.expr).to_json()
		return payload

def _knots_from_names(names: Optional[List[str]], count: int) -> List[SeifertMatrix]:
	if not names and count < 1:
		raise PreconditionError(f"--count must be at least 1, got {count}.")
	if names:
		return [knot_factories.lookup(name) for name in names]
	return arf_zero_twist_sums(count)

class FamilyCommand(Command):
	def __init__(self, args: argparse.Namespace):
		super().__init__(args)
		if args.n > self.max_n:
			raise PreconditionError(f"Family depth {args.n} exceeds --max-n {self.max_n}.")
		self.knots = _knots_from_names(args.knots, args.count)

	def perform(self) -> Dict[str, Any]:
		engine = self.engine()
		members = generate_family(self.args.n, self.args.m, self.knots)
		return {
			"n": self.args.n,
			"m": self.args.m,
			"eta": str(canonical_curve(self.args.n, self.args.m)),
			"members": [
				{
					"knot": knot.label,
					"tags": infer_tags(member, engine).to_json(),
					"rho_vector": engine.rho_vector(member).to_json(),
					"vanishing": check_vanishing(member, engine).to_json(),
				}
				for knot, member in zip(self.knots, members)
			],
		}

class ApproxCommand(Command):
	def __init__(self, args: argparse.Namespace):
		super().__init__(args)
		try:
			self.target = Fraction(args.target)
			self.epsilon = Fraction(args.epsilon)
		except (ValueError, ZeroDivisionError) as error:
			raise ParseError(f"Target and epsilon must be rationals or decimals: {error}") from error
		if self.epsilon <= 0:
			raise PreconditionError(f"--epsilon must be positive, got {self.epsilon}.")
		if args.budget < 1:
			raise PreconditionError(f"--budget must be at least 1, got {args.budget}.")
		self.library = load_library(args.library, self.tolerance)

	def perform(self) -> Dict[str, Any]:
		result = approximate_target(self.target, self.epsilon, self.library, self.args.budget)
		knot = result.knot()
		recomputed = rho0(knot, self.tolerance)
		payload = result.to_json()
		payload["recomputed"] = recomputed.to_json()
		payload["round_trip"] = abs(recomputed.value - self.target) + recomputed.error_bound < self.epsilon
		return payload

class IndependenceCommand(Command):
	"""Bounded relation search over rho_n of the family S_eta (rho0 of the knots when n = 0)."""

	def __init__(self, args: argparse.Namespace):
		super().__init__(args)
		if args.n > self.max_n:
			raise PreconditionError(f"Family depth {args.n} exceeds --max-n {self.max_n}.")
		try:
			self.tau = Fraction(args.tau)
		except (ValueError, ZeroDivisionError) as error:
			raise ParseError(f"--tau must be a rational or decimal: {error}") from error
		if self.tau <= 0 or args.bound < 1:
			raise PreconditionError(f"Need --bound >= 1 and --tau > 0, got {args.bound} and {self.tau}.")
		self.knots = _knots_from_names(args.knots, args.count)

	def perform(self) -> Dict[str, Any]:
		engine = self.engine()
		n, m = self.args.n, self.args.m
		members = generate_family(n, m, self.knots)
		values = [engine.rho(member, n) for member in members]
		certificate = independence_certificate(
			values, self.args.bound, self.tau, [knot.label for knot in self.knots]
		)
		payload = certificate.to_json()
		payload["n"] = n
		payload["m"] = m
		return payload

class AuditCommand(Command):
	"""Vanishing audit of one expression, or of generated families for n <= max_n and m = 2, 3."""

	def __init__(self, args: argparse.Namespace):
		super().__init__(args)
		self.expr = None
		if args.dsl is not None or args.expr_file is not None:
			self.expr = load_expr(args.dsl, args.expr_file, self.max_n)
		self.knots = _knots_from_names(args.knots, args.count)

	def perform(self) -> Dict[str, Any]:
		engine = self.engine()
		if self.expr is not None:
			report = check_vanishing(self.expr, engine)
			return {"expression": str(self.expr), "report": report.to_json()}
		reports = []
		for n in range(self.max_n + 1):
			for m in (2, 3):
				for member in generate_family(n, m, self.knots):
					report = check_vanishing(member, engine)
					reports.append({"n": n, "m": m, "expression": str(member), "consistent": report.consistent})
		if not all(item["consistent"] for item in reports):
			raise EngineInconsistency("Vanishing audit failed on the family corpus.")
		return {"audited": len(reports), "reports": reports}

COMMANDS: Dict[str, Type[Command]] = {
	"knot-info": KnotInfoCommand,
	"sigfn": SignatureFunctionCommand,
	"rho0": Rho0Command,
	"depth": DepthCommand,
	"eval": EvalCommand,
	"bing": BingCommand,
	"family": FamilyCommand,
	"approx": ApproxCommand,
	"independence": IndependenceCommand,
	"audit": AuditCommand,
}
