"""Solvable-degree and grope-height tags, and the vanishing audit that checks the engine against them."""
from __future__ import annotations

import logging

from typing import List, Optional

from exceptions import EngineInconsistency, PreconditionError
from expressions import (
	BoundaryLinkExpr,
	BoundaryStack,
	Infect,
	ManifoldExpr,
	TrivialLinkSurgery,
)
from freegroup import FreeWord
from provenance import ProvenanceLog
from rho_engine import RhoEngine
from seifert import SeifertMatrix, arf
from signature import Rho0Value

LOGGER = logging.getLogger(__name__)

def _min_tag(a: Optional[int], b: Optional[int]) -> Optional[int]:
	if a is None or b is None:
		return None
	return min(a, b)

class FiltrationTags:
	"""
	Lower bounds on (n)-solvability and grope height, set only by inference rules.

	`slice` means the expression is known to be slice: every level holds.
	An absent tag says nothing about the expression.
	"""

	def __init__(
		self,
		solvable_degree: Optional[int] = None,
		grope_height: Optional[int] = None,
		slice: bool = False,
		certificates: Optional[ProvenanceLog] = None,
	):
		self.solvable_degree = solvable_degree
		self.grope_height = grope_height
		self.slice = slice
		self.certificates = certificates if certificates is not None else ProvenanceLog()

	@classmethod
	def sliced(cls, reason: str) -> FiltrationTags:
		tags = cls(slice=True)
		tags.certificates.add_note(reason, "slice")
		return tags

	@property
	def is_tagged(self) -> bool:
		return self.slice or self.solvable_degree is not None or self.grope_height is not None

	def combine(self, other: FiltrationTags) -> FiltrationTags:
		"""Tags of a stack or of a further infection: the minimum, with slice as infinity."""
		if self.slice:
			result = FiltrationTags(other.solvable_degree, other.grope_height, other.slice)
		elif other.slice:
			result = FiltrationTags(self.solvable_degree, self.grope_height)
		else:
			result = FiltrationTags(
				_min_tag(self.solvable_degree, other.solvable_degree),
				_min_tag(self.grope_height, other.grope_height),
			)
		result.certificates.extend(self.certificates)
		result.certificates.extend(other.certificates)
		return result

	def to_json(self) -> dict:
		return {
			"solvable_degree": "slice" if self.slice else self.solvable_degree,
			"grope_height": "slice" if self.slice else self.grope_height,
			"certificates": self.certificates.lines(),
		}

	def __repr__(self) -> str:
		if self.slice:
			return "FiltrationTags(slice)"
		return f"FiltrationTags(solvable={self.solvable_degree}, grope={self.grope_height})"

def _infection_tags(eta: FreeWord, knot: SeifertMatrix, engine: RhoEngine) -> FiltrationTags:
	"""Tags of T(eta, K) over a trivial link."""
	depth = engine.depth(eta)
	tags = FiltrationTags(grope_height=depth + 1)
	tags.certificates.add_note(f"T({eta}, {knot.label}) bounds a grope of height {depth + 1}", "grope")
	if arf(knot) == 0:
		tags.solvable_degree = depth
		tags.certificates.add_note(f"T({eta}, {knot.label}) is ({depth})-solvable: Arf({knot.label}) = 0", "solvable")
	else:
		tags.certificates.add_note(f"Arf({knot.label}) = 1, no solvability tag from the infection", "solvable")
	return _apply_grope_rule(tags)

def _apply_grope_rule(tags: FiltrationTags) -> FiltrationTags:
	"""
	A grope of height h >= 3 in D^4 makes the link (h - 2)-solvable.

	Height 2 is skipped: it would tag degree 0, which an Arf 1 infection on a
	depth 1 curve must not receive.
	"""
	height = tags.grope_height
	if height is None or height < 3:
		return tags
	if tags.solvable_degree is None or tags.solvable_degree < height - 2:
		tags.solvable_degree = height - 2
		tags.certificates.add_note(f"grope height {height} gives ({height - 2})-solvable", "grope")
	return tags

def infer_tags(expr: ManifoldExpr, engine: Optional[RhoEngine] = None) -> FiltrationTags:
	if engine is None:
		engine = RhoEngine()
	if isinstance(expr, TrivialLinkSurgery):
		return FiltrationTags.sliced(f"trivial({expr.components}) is slice")
	if isinstance(expr, Infect):
		base = infer_tags(expr.base, engine)
		if not base.is_tagged:
			return FiltrationTags()
		return base.combine(_infection_tags(expr.eta, expr.knot, engine))
	if isinstance(expr, BoundaryLinkExpr):
		tags = FiltrationTags.sliced(f"trivial {expr.components}-component string link is slice")
		for eta, knot in expr.infections:
			tags = tags.combine(_infection_tags(eta, knot, engine))
		return tags
	if isinstance(expr, BoundaryStack):
		tags = infer_tags(expr.links[0], engine)
		for link in expr.links[1:]:
			tags = tags.combine(infer_tags(link, engine))
		return tags
	# knot surgeries and connected sums carry no tags
	return FiltrationTags()

class VanishingCheck:
	def __init__(self, level: int, value: Rho0Value):
		self.level = level
		self.value = value

	@property
	def passed(self) -> bool:
		return self.value.is_consistent_with_zero()

	def to_json(self) -> dict:
		return {"n": self.level, "rho": self.value.to_json(), "passed": self.passed}

class VanishingReport:
	def __init__(self, tags: FiltrationTags, checks: List[VanishingCheck]):
		self.tags = tags
		self.checks = checks

	@property
	def consistent(self) -> bool:
		return all(check.passed for check in self.checks)

	def failures(self) -> List[VanishingCheck]:
		return [check for check in self.checks if not check.passed]

	def to_json(self) -> dict:
		return {
			"tags": self.tags.to_json(),
			"checks": [check.to_json() for check in self.checks],
			"consistent": self.consistent,
		}

def check_vanishing(expr: ManifoldExpr, engine: Optional[RhoEngine] = None, strict: bool = True) -> VanishingReport:
	"""
	Audit rho_{k-1}(expr) = 0 for every k up to the tagged solvable degree.

	Slice expressions are checked at every level the rho vector distinguishes.
	With `strict` a failed check raises EngineInconsistency.
	"""
	if engine is None:
		engine = RhoEngine()
	tags = infer_tags(expr, engine)
	vector = engine.rho_vector(expr)
	if tags.slice:
		levels = len(vector) + 1
	elif tags.solvable_degree is not None:
		levels = tags.solvable_degree
	else:
		raise PreconditionError(f"{expr} has no solvability tag to audit.")
	checks = [VanishingCheck(k, vector[k]) for k in range(levels)]
	report = VanishingReport(tags, checks)
	if strict and not report.consistent:
		failed = ", ".join(f"rho_{check.level} = {check.value.value}" for check in report.failures())
		LOGGER.error("vanishing audit failed for %s: %s", expr, failed)
		raise EngineInconsistency(f"Vanishing audit failed for {expr}: {failed}.")
	return report
