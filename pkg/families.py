"""
Example families: canonical deep curves, iterated Bing doubles, the families
S_eta = {T(eta, K) : Arf(K) = 0}, knot libraries, and approximation of rho_0 targets.
"""
from __future__ import annotations

import functools
import itertools
import logging
import math

from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import pyparsing as pp

import knot_factories
import settings

from exceptions import (
	DepthOverflow,
	NotArfZero,
	ParseError,
	PreconditionError,
	RankMismatch,
	UnreachableTarget,
)
from expressions import BoundaryLinkExpr, Infect, KnotSurgery, ManifoldExpr, TrivialLinkSurgery
from freegroup import FreeWord, commutator
from rho_engine import RhoEngine
from seifert import SeifertMatrix, arf, block_sum, mirror
from signature import Rho0Value, rho0
from solvable import derived_depth
from verdicts import DepthKind

LOGGER = logging.getLogger(__name__)

# --Curves--

def _leaf_pool(m: int) -> Iterator[FreeWord]:
	"""Meridians first, then their conjugates, inverses and squares."""
	generators = [FreeWord.generator(m, i) for i in range(1, m + 1)]
	yield from generators
	for g in generators:
		for x in generators:
			if x != g:
				yield x.conjugate(g)
	for x in generators:
		yield x.inverse()
	for x in generators:
		yield x ** 2

def _balanced_commutator(leaves: Sequence[FreeWord]) -> FreeWord:
	level = list(leaves)
	while len(level) > 1:
		level = [commutator(level[i], level[i + 1]) for i in range(0, len(level), 2)]
	return level[0]

def _curve_candidates(n: int, m: int) -> Iterator[FreeWord]:
	width = 2 ** n
	pool = list(itertools.islice(_leaf_pool(m), 4 * width))
	# distinct meridians where m allows, reused ones otherwise
	for shift in range(len(pool) - width + 1):
		yield _balanced_commutator(pool[shift:shift + width])
	# nested reuse: [c, c^g] with g running through the meridians
	curve = commutator(FreeWord.generator(m, 1), FreeWord.generator(m, 2))
	for level in range(1, n):
		curve = commutator(curve, curve.conjugate(FreeWord.generator(m, level % m + 1)))
	yield curve

@functools.lru_cache(maxsize=None)
def canonical_curve(n: int, m: int) -> FreeWord:
	"""
	A deterministic word in F^(n) - F^(n+1) of the free group on m >= 2 meridians.

	For m >= 2^n this is the balanced commutator tree of distinct meridians.
	Every candidate is checked with derived_depth before it is returned.
	"""
	if n < 0:
		raise PreconditionError(f"Curve depth must be >= 0, got {n}.")
	if n == 0:
		return FreeWord.generator(max(m, 1), 1)
	if m < 2:
		raise RankMismatch(f"Curves of depth {n} >= 1 need at least two meridians, got m = {m}.")
	for candidate in _curve_candidates(n, m):
		depth = derived_depth(candidate, n)
		if depth.kind is DepthKind.EXACT and depth.depth == n:
			LOGGER.debug("canonical curve of depth %d on %d meridians: %s", n, m, candidate)
			return candidate
	raise DepthOverflow(f"No canonical curve of depth {n} on {m} meridians was verified.", "")

# --Bing doubles--

def _pattern_grammar() -> pp.ParserElement:
	tree = pp.Forward()
	leaf = pp.Word(pp.nums).set_parse_action(lambda toks: int(toks[0]))
	node = pp.Group(pp.Suppress("[") + tree + pp.Suppress(",") + tree + pp.Suppress("]"))
	tree <<= leaf | node
	return tree

PATTERN = _pattern_grammar()

def _pattern_leaves(tree) -> List[int]:
	if isinstance(tree, int):
		return [tree]
	return _pattern_leaves(tree[0]) + _pattern_leaves(tree[1])

def _pattern_word(tree, m: int) -> FreeWord:
	if isinstance(tree, int):
		return FreeWord.generator(m, tree)
	return commutator(_pattern_word(tree[0], m), _pattern_word(tree[1], m))

def parse_pattern(pattern: str):
	"""
	A Bing doubling pattern: a commutator tree over component numbers, such as
	"[1,2]" or "[[1,2],[3,4]]". "iterations:k" is the balanced tree on 2^k
	components. Returns the parsed tree and the component count.
	"""
	pattern = pattern.strip()
	if pattern.startswith("iterations:"):
		try:
			k = int(pattern[len("iterations:"):])
		except ValueError as error:
			raise ParseError(f"Malformed pattern {pattern!r}.") from error
		if k < 0:
			raise ParseError(f"Iteration count must be >= 0, got {k}.")
		tree = list(range(1, 2 ** k + 1))
		while len(tree) > 1:
			tree = [[tree[i], tree[i + 1]] for i in range(0, len(tree), 2)]
		return tree[0], 2 ** k
	try:
		tree = PATTERN.parse_string(pattern, parse_all=True).as_list()[0]
	except pp.ParseException as error:
		raise ParseError(f"Malformed pattern {pattern!r}: {error}") from error
	leaves = _pattern_leaves(tree)
	m = max(leaves)
	if min(leaves) < 1 or set(leaves) != set(range(1, m + 1)):
		raise ParseError(f"Pattern {pattern!r} must use every component 1..{m}.")
	return tree, m

class BingDouble:
	"""An iterated Bing double of a knot, as an infection of the trivial link."""

	def __init__(self, knot: SeifertMatrix, pattern: str, expr: ManifoldExpr, components: int, eta: Optional[FreeWord], depth: Optional[int]):
		self.knot = knot
		self.pattern = pattern
		self.expr = expr
		self.components = components
		self.eta = eta
		self.depth = depth

	def to_json(self) -> dict:
		return {
			"knot": self.knot.label,
			"pattern": self.pattern,
			"components": self.components,
			"eta": str(self.eta) if self.eta is not None else None,
			"depth": self.depth,
			"expression": self.expr.to_json(),
		}

def bing_double(knot: SeifertMatrix, pattern: str = "[1,2]", max_n: Optional[int] = None) -> BingDouble:
	if max_n is None:
		max_n = settings.DEFAULT_MAX_DEPTH
	tree, m = parse_pattern(pattern)
	if isinstance(tree, int):
		return BingDouble(knot, pattern, KnotSurgery(knot), 1, None, None)
	eta = _pattern_word(tree, m)
	depth = derived_depth(eta, max_n)
	if depth.kind is DepthKind.EXCEEDS:
		raise DepthOverflow(f"Pattern {pattern!r} gives a curve deeper than max_n = {max_n}.", str(eta))
	if depth.kind is DepthKind.IDENTITY:
		raise ParseError(f"Pattern {pattern!r} gives the trivial curve.")
	expr = Infect(TrivialLinkSurgery(m), eta, knot)
	return BingDouble(knot, pattern, expr, m, eta, depth.depth)

# --Families--

def generate_family(n: int, m: int, knots: Sequence[SeifertMatrix]) -> List[BoundaryLinkExpr]:
	"""T(eta_n, K) for each K, with eta_n = canonical_curve(n, m). Every K must have Arf invariant 0."""
	if m < 2:
		raise RankMismatch(f"Families live on at least two components, got m = {m}.")
	for knot in knots:
		value = arf(knot)
		if value != 0:
			raise NotArfZero(f"{knot.label} has Arf invariant {value}; S_eta only admits Arf 0 knots.", value)
	eta = canonical_curve(n, m)
	return [BoundaryLinkExpr(m, [(eta, knot)]) for knot in knots]

# --Libraries--

class LibraryEntry:
	def __init__(self, knot: SeifertMatrix, rho0: Rho0Value, arf: int):
		self.knot = knot
		self.rho0 = rho0
		self.arf = arf

	@property
	def name(self) -> str:
		return self.knot.label

	def to_json(self) -> dict:
		payload = self.knot.to_json()
		payload["name"] = self.name
		payload["rho0"] = self.rho0.to_json()
		payload["arf"] = self.arf
		return payload

class KnotLibrary:
	"""Named knots with cached rho0 values and Arf invariants."""

	def __init__(self, knots: Sequence[SeifertMatrix] = (), tolerance: Optional[float] = None):
		self.tolerance = settings.DEFAULT_TOLERANCE if tolerance is None else tolerance
		self.entries: Dict[str, LibraryEntry] = {}
		for knot in knots:
			self.add(knot)

	@classmethod
	def default(cls, tolerance: Optional[float] = None) -> KnotLibrary:
		return cls.twist_library((-2, -3, -4), tolerance, (knot_factories.trefoil, knot_factories.figure8))

	@classmethod
	def twist_library(
		cls, ks: Sequence[int], tolerance: Optional[float] = None, extra: Sequence[SeifertMatrix] = ()
	) -> KnotLibrary:
		"""`extra` knots first, then twist(k) for each k."""
		return cls(list(extra) + [knot_factories.twist(k) for k in ks], tolerance)

	@classmethod
	def from_json(cls, data: list, tolerance: Optional[float] = None) -> KnotLibrary:
		try:
			knots = [SeifertMatrix(item["matrix"], name=item["name"]) for item in data]
		except (KeyError, TypeError) as error:
			raise ParseError(f"Malformed library entry: {error}") from error
		return cls(knots, tolerance)

	def add(self, knot: SeifertMatrix) -> LibraryEntry:
		entry = LibraryEntry(knot, rho0(knot, self.tolerance), arf(knot))
		self.entries[entry.name] = entry
		return entry

	def __iter__(self) -> Iterator[LibraryEntry]:
		return iter(self.entries.values())

	def __len__(self) -> int:
		return len(self.entries)

	def __getitem__(self, name: str) -> LibraryEntry:
		return self.entries[name]

	def verify(self) -> bool:
		"""Recompute every cached value."""
		return all(
			rho0(entry.knot, self.tolerance) == entry.rho0 and arf(entry.knot) == entry.arf
			for entry in self
		)

	def to_json(self) -> list:
		return [entry.to_json() for entry in self]

def arf_zero_twist_sums(count: int) -> List[SeifertMatrix]:
	"""
	Distinct Arf 0 knots built from twist knots: twist(k) for even k < 0,
	and twist(k) # twist(k - 2) for odd k < 0 (two Arf 1 summands).
	"""
	knots: List[SeifertMatrix] = []
	k = -2
	while len(knots) < count:
		if k % 2 == 0:
			knots.append(knot_factories.twist(k))
		else:
			knots.append(block_sum([knot_factories.twist(k), knot_factories.twist(k - 2)], name=f"twist({k}) # twist({k - 2})"))
		k -= 1
	for knot in knots:
		assert arf(knot) == 0, knot
	return knots

# --Approximation--

class Approximation:
	"""sum_i c_i K_i realized as a block sum, with its certified distance to the target."""

	def __init__(self, target: Fraction, epsilon: Fraction, coefficients: Dict[str, int], terms: List[Tuple[LibraryEntry, int]], scale: int):
		self.target = target
		self.epsilon = epsilon
		self.coefficients = coefficients
		self.terms = terms
		self.scale = scale
		self.value = Rho0Value.zero()
		for entry, coeff in terms:
			self.value = self.value + entry.rho0.scale(coeff)

	@property
	def distance(self) -> Fraction:
		return abs(self.value.value - self.target)

	@property
	def certified(self) -> bool:
		return self.distance + self.value.error_bound < self.epsilon

	def knot(self) -> SeifertMatrix:
		summands: List[SeifertMatrix] = []
		for entry, coeff in self.terms:
			summand = entry.knot if coeff > 0 else mirror(entry.knot)
			summands.extend([summand] * abs(coeff))
		name = " # ".join(f"{coeff}*{entry.name}" for entry, coeff in self.terms) or "unknot"
		return block_sum(summands, name=name)

	def to_json(self) -> dict:
		return {
			"target": str(self.target),
			"epsilon": str(self.epsilon),
			"scale": self.scale,
			"coefficients": dict(self.coefficients),
			"rho0": self.value.to_json(),
			"distance": str(self.distance),
			"knot": self.knot().to_json(),
		}

def _coefficient_order(bound: int) -> List[int]:
	order = [0]
	for c in range(1, bound + 1):
		order.extend([c, -c])
	return order

def _search(values: List[float], target: float, epsilon: float, bound: int) -> Tuple[Optional[Tuple[int, ...]], float, Tuple[int, ...]]:
	"""
	Depth-first branch and bound over coefficient vectors in [-bound, bound].

	Returns (first hit or None, best distance among visited leaves, its vector).
	"""
	reach = [0.0] * (len(values) + 1)
	for i in range(len(values) - 1, -1, -1):
		reach[i] = reach[i + 1] + bound * abs(values[i])
	order = _coefficient_order(bound)
	best = [math.inf, tuple([0] * len(values))]
	chosen: List[int] = []

	def visit(i: int, partial: float) -> Optional[Tuple[int, ...]]:
		gap = abs(target - partial)
		if i == len(values):
			if gap < best[0]:
				best[0], best[1] = gap, tuple(chosen)
			return tuple(chosen) if gap < epsilon else None
		if gap - reach[i] >= epsilon:
			return None
		for c in order:
			chosen.append(c)
			hit = visit(i + 1, partial + c * values[i])
			chosen.pop()
			if hit is not None:
				return hit
		return None

	return visit(0, 0.0), best[0], best[1]

def approximate_target(
	r: Union[Fraction, float, str],
	epsilon: Union[Fraction, float, str],
	library: KnotLibrary,
	budget: Optional[int] = None,
) -> Approximation:
	"""
	An integer combination of library knots with |rho0 - r| < epsilon, certified.

	Targets with |r| >= 2 are divided by m = floor(|r|/2) + 1, approximated
	to epsilon/m, and the coefficients multiplied back by m.
	"""
	target = Fraction(r)
	epsilon = Fraction(epsilon)
	if epsilon <= 0:
		raise PreconditionError(f"epsilon must be positive, got {epsilon}.")
	budget = settings.COEFFICIENT_BUDGET if budget is None else budget
	usable = [entry for entry in library if entry.rho0.is_certainly_nonzero()]
	if target == 0:
		return Approximation(target, epsilon, {}, [], 1)
	if not usable:
		raise PreconditionError("The library has no knot with nonzero rho0.")
	scale = math.floor(abs(target) / 2) + 1 if abs(target) >= 2 else 1
	scaled_target, scaled_epsilon = target / scale, epsilon / scale
	values = [float(entry.rho0.value) for entry in usable]
	best_distance = math.inf
	for bound in range(1, budget + 1):
		hit, distance, _ = _search(values, float(scaled_target), float(scaled_epsilon), bound)
		best_distance = min(best_distance, distance * scale)
		if hit is None:
			continue
		terms = [(entry, c * scale) for entry, c in zip(usable, hit) if c]
		result = Approximation(
			target,
			epsilon,
			{entry.name: coeff for entry, coeff in terms},
			terms,
			scale,
		)
		if result.certified:
			LOGGER.info("approximated %s within %s using %s", target, epsilon, result.coefficients)
			return result
		LOGGER.warning("float search hit %s but certification failed; widening", hit)
	raise UnreachableTarget(
		f"No combination with coefficients up to {budget} reaches {target} within {epsilon}; "
		f"best distance {best_distance:.6g}.",
		best_distance,
	)

# --Independence of rho_n as functions of n--

class IndependenceWitness:
	"""rho_i(M_n) for M_n = T(eta_n, K): zero for i < n, rho0(K) for i >= n."""

	def __init__(self, knot: SeifertMatrix, table: List[List[Rho0Value]]):
		self.knot = knot
		self.table = table

	@property
	def is_triangular(self) -> bool:
		for n, row in enumerate(self.table):
			for i, value in enumerate(row):
				if i < n and not value.is_consistent_with_zero():
					return False
				if i >= n and not value.is_certainly_nonzero():
					return False
		return True

	def to_json(self) -> dict:
		return {
			"knot": self.knot.label,
			"table": [[value.to_json() for value in row] for row in self.table],
			"triangular": self.is_triangular,
		}

def rho_independence_witness(max_n: int, m: int, knot: SeifertMatrix, engine: Optional[RhoEngine] = None) -> IndependenceWitness:
	"""Rows n = 0..max_n, columns i = 0..max_n of rho_i(T(eta_n, K))."""
	if engine is None:
		engine = RhoEngine(max_n)
	table = []
	for n in range(max_n + 1):
		member = BoundaryLinkExpr(m, [(canonical_curve(n, m), knot)])
		vector = engine.rho_vector(member)
		table.append([vector[i] for i in range(max_n + 1)])
	return IndependenceWitness(knot, table)
