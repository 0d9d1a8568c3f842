from __future__ import annotations

import logging
import threading

from typing import Dict, List, Optional, Sequence

import settings

from exceptions import DepthOverflow, PreconditionError
from expressions import (
	BoundaryLinkExpr,
	BoundaryStack,
	ConnectedSum,
	Infect,
	KnotSurgery,
	ManifoldExpr,
	TrivialLinkSurgery,
)
from freegroup import FreeWord
from provenance import ProvenanceLog
from seifert import SeifertMatrix
from signature import Rho0Value, rho0
from solvable import DerivedDepth, derived_depth
from verdicts import DepthKind, ObstructionKind

LOGGER = logging.getLogger(__name__)

class RhoVector:
	"""n -> rho_n: explicit values for n < len(head), `tail` from there on."""

	def __init__(self, head: Sequence[Rho0Value], tail: Rho0Value):
		self.head: List[Rho0Value] = list(head)
		self.tail = tail

	@classmethod
	def constant(cls, value: Rho0Value, length: int = 0) -> RhoVector:
		return cls([value] * length, value)

	def __getitem__(self, n: int) -> Rho0Value:
		if n < 0:
			raise IndexError(n)
		return self.head[n] if n < len(self.head) else self.tail

	def __len__(self) -> int:
		return len(self.head)

	def padded(self, length: int) -> RhoVector:
		if length <= len(self.head):
			return self
		return RhoVector(self.head + [self.tail] * (length - len(self.head)), self.tail)

	def __add__(self, other: RhoVector) -> RhoVector:
		length = max(len(self), len(other))
		left, right = self.padded(length), other.padded(length)
		return RhoVector([a + b for a, b in zip(left.head, right.head)], self.tail + other.tail)

	def with_increment(self, value: Rho0Value, depth: int) -> RhoVector:
		"""Add `value` to every entry from index `depth` on."""
		padded = self.padded(depth)
		head = [entry + value if n >= depth else entry for n, entry in enumerate(padded.head)]
		return RhoVector(head, padded.tail + value)

	def entries(self) -> List[Rho0Value]:
		"""The head followed by one copy of the tail."""
		return self.head + [self.tail]

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, RhoVector):
			return NotImplemented
		length = max(len(self), len(other))
		return self.padded(length).entries() == other.padded(length).entries()

	def __hash__(self) -> int:
		return hash(self.tail)

	def to_json(self) -> dict:
		return {"head": [value.to_json() for value in self.head], "tail": self.tail.to_json()}

	def __repr__(self) -> str:
		head = ", ".join(str(entry.value) for entry in self.head)
		return f"RhoVector({head}; tail {self.tail.value})"

class SliceVerdict:
	def __init__(self, kind: ObstructionKind, level: Optional[int] = None, value: Optional[Rho0Value] = None):
		self.kind = kind
		self.level = level
		self.value = value

	@property
	def obstructed(self) -> bool:
		return self.kind is ObstructionKind.OBSTRUCTED

	def to_json(self) -> dict:
		payload: dict = {"verdict": self.kind.value}
		if self.obstructed:
			payload["n"] = self.level
			payload["rho"] = self.value.to_json()
		return payload

	def __repr__(self) -> str:
		if self.obstructed:
			return f"Obstructed({self.level}, {self.value.value})"
		return "Inconclusive"

class RhoEngine:
	"""
	Evaluates rho_n on expression DAGs by rewriting.

	Results are memoized per node and per curve. Readers never lock; a single
	lock serializes insertion.
	"""

	def __init__(self, max_n: Optional[int] = None, tolerance: Optional[float] = None):
		if max_n is None:
			max_n = settings.DEFAULT_MAX_DEPTH
		if not 0 <= max_n <= settings.MAX_DEPTH_LIMIT:
			raise PreconditionError(f"max_n must be between 0 and {settings.MAX_DEPTH_LIMIT}, got {max_n}.")
		self.max_n = max_n
		self.tolerance = settings.DEFAULT_TOLERANCE if tolerance is None else tolerance
		self.provenance = ProvenanceLog()
		self._vectors: Dict[int, RhoVector] = {}
		self._nodes: Dict[int, ManifoldExpr] = {}
		self._depths: Dict[FreeWord, int] = {}
		self._lock = threading.Lock()

	def knot_rho0(self, knot: SeifertMatrix) -> Rho0Value:
		return rho0(knot, self.tolerance)

	def depth(self, eta: FreeWord) -> int:
		"""Derived depth of an infection curve, refusing anything that is not exact within max_n."""
		cached = self._depths.get(eta)
		if cached is not None:
			return cached
		result: DerivedDepth = derived_depth(eta, self.max_n)
		if result.kind is DepthKind.EXCEEDS:
			raise DepthOverflow(
				f"Curve {eta} lies in F^({self.max_n + 1}); its depth exceeds max_n = {self.max_n}.",
				str(eta),
			)
		if result.kind is DepthKind.IDENTITY:
			raise PreconditionError("The trivial curve cannot be an infection curve.")
		with self._lock:
			self._depths.setdefault(eta, result.depth)
		return result.depth

	def max_depth(self, expr: ManifoldExpr) -> int:
		return max((self.depth(eta) for node in expr.walk() for eta in node.curves()), default=0)

	def rho_vector(self, expr: ManifoldExpr) -> RhoVector:
		cached = self._vectors.get(id(expr))
		if cached is not None:
			return cached
		vector = self._evaluate(expr)
		with self._lock:
			# keep the node alive so its id is not reused
			self._nodes.setdefault(id(expr), expr)
			vector = self._vectors.setdefault(id(expr), vector)
		return vector

	def rho(self, expr: ManifoldExpr, n: int) -> Rho0Value:
		if n < 0:
			raise PreconditionError(f"rho_n is defined for n >= 0, got {n}.")
		return self.rho_vector(expr)[n]

	def _infection_increment(self, vector: RhoVector, eta: FreeWord, knot: SeifertMatrix, bounds_disk: bool) -> RhoVector:
		if not bounds_disk:
			raise PreconditionError(f"Curve {eta} is not asserted to bound a disk in S^3; refusing to evaluate.")
		depth = self.depth(eta)
		value = self.knot_rho0(knot)
		self.provenance.add_note(
			f"curve {eta} (bounds a disk in S^3, caller-asserted) has depth {depth}: "
			f"rho_i gains rho0({knot.label}) for i >= {depth}",
			"infection",
		)
		return vector.with_increment(value, depth)

	def _evaluate(self, expr: ManifoldExpr) -> RhoVector:
		if isinstance(expr, TrivialLinkSurgery):
			self.provenance.add_note(f"trivial({expr.components}) has rho_n = 0", "trivial-link")
			return RhoVector.constant(Rho0Value.zero())
		if isinstance(expr, KnotSurgery):
			self.provenance.add_note(f"rho_n({expr.knot.label}) = rho0", "knot")
			return RhoVector.constant(self.knot_rho0(expr.knot))
		if isinstance(expr, Infect):
			base = self.rho_vector(expr.base)
			return self._infection_increment(base, expr.eta, expr.knot, expr.bounds_disk)
		if isinstance(expr, ConnectedSum):
			self.provenance.add_note("rho_n adds under connected sum", "connected-sum")
			return self.rho_vector(expr.left) + self.rho_vector(expr.right)
		if isinstance(expr, BoundaryLinkExpr):
			vector = RhoVector.constant(Rho0Value.zero())
			for eta, knot in expr.infections:
				vector = self._infection_increment(vector, eta, knot, True)
			return vector
		if isinstance(expr, BoundaryStack):
			self.provenance.add_note("rho_n adds under stacking of boundary string links", "stacking")
			vector = RhoVector.constant(Rho0Value.zero())
			for link in expr.links:
				vector = vector + self.rho_vector(link)
			return vector
		raise PreconditionError(f"Cannot evaluate expression of type {type(expr).__name__}.")

	def slice_obstruction(self, expr: ManifoldExpr) -> SliceVerdict:
		"""The first rho_n that is certainly nonzero. Never claims sliceness."""
		for n, value in enumerate(self.rho_vector(expr).entries()):
			if value.is_certainly_nonzero():
				return SliceVerdict(ObstructionKind.OBSTRUCTED, n, value)
		return SliceVerdict(ObstructionKind.INCONCLUSIVE)

def rho_vector(expr: ManifoldExpr, max_n: Optional[int] = None) -> RhoVector:
	return RhoEngine(max_n).rho_vector(expr)

def rho(expr: ManifoldExpr, n: int, max_n: Optional[int] = None) -> Rho0Value:
	return RhoEngine(max_n).rho(expr, n)

def slice_obstruction(expr: ManifoldExpr, max_n: Optional[int] = None) -> SliceVerdict:
	return RhoEngine(max_n).slice_obstruction(expr)
