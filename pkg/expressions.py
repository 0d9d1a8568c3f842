from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple

import knot_factories

from exceptions import ParseError, PreconditionError, RankMismatch
from freegroup import FreeWord, parse_word
from seifert import SeifertMatrix

class ManifoldExpr:
	"""
	A node of an immutable expression DAG describing a closed 3-manifold,
	or the zero-surgery on a link.

	`rank` is the rank of the free group in which infection curves on this
	node are read.
	"""

	kind = "expr"

	@property
	def rank(self) -> int:
		raise NotImplementedError()

	def children(self) -> Tuple[ManifoldExpr, ...]:
		return ()

	def curves(self) -> List[FreeWord]:
		"""Infection curves introduced at this node."""
		return []

	def walk(self) -> Iterable[ManifoldExpr]:
		"""Every node below and including this one, each shared node once."""
		seen = set()
		stack: List[ManifoldExpr] = [self]
		while stack:
			node = stack.pop()
			if id(node) in seen:
				continue
			seen.add(id(node))
			yield node
			stack.extend(reversed(node.children()))

	def to_json(self) -> dict:
		raise NotImplementedError()

	def __str__(self) -> str:
		raise NotImplementedError()

class KnotSurgery(ManifoldExpr):
	"""M_K, zero surgery on a knot. Curves are read in the meridian's infinite cyclic group."""

	kind = "knot"

	def __init__(self, knot: SeifertMatrix):
		self.knot = knot

	@property
	def rank(self) -> int:
		return 1

	def to_json(self) -> dict:
		return {"type": self.kind, "knot": self.knot.to_json()}

	def __str__(self) -> str:
		return f'knot("{self.knot.label}")'

class TrivialLinkSurgery(ManifoldExpr):
	"""#_m S^1 x S^2, zero surgery on the m-component trivial link."""

	kind = "trivial"

	def __init__(self, components: int):
		if components < 1:
			raise PreconditionError(f"A trivial link needs at least one component, got {components}.")
		self.components = components

	@property
	def rank(self) -> int:
		return self.components

	def to_json(self) -> dict:
		return {"type": self.kind, "components": self.components}

	def __str__(self) -> str:
		return f"trivial({self.components})"

def _check_curve(eta: FreeWord, rank: int, where: str) -> None:
	if eta.rank != rank:
		raise RankMismatch(f"Curve {eta} has rank {eta.rank} but {where} has free rank {rank}.")
	if eta.is_identity:
		raise PreconditionError(f"Infection curve on {where} must be nontrivial.")

class Infect(ManifoldExpr):
	"""
	M(eta, K): remove a neighbourhood of eta and glue in the exterior of K.

	`bounds_disk` is asserted by the caller: eta bounds an embedded disk in S^3.
	"""

	kind = "infect"

	def __init__(self, base: ManifoldExpr, eta: FreeWord, knot: SeifertMatrix, bounds_disk: bool = True):
		_check_curve(eta, base.rank, str(base))
		if isinstance(base, KnotSurgery) and any(index != 1 for index, _ in eta.letters):
			raise PreconditionError(f"On a knot surgery only meridian powers x1^k are allowed, got {eta}.")
		self.base = base
		self.eta = eta
		self.knot = knot
		self.bounds_disk = bounds_disk

	@property
	def rank(self) -> int:
		return self.base.rank

	def children(self) -> Tuple[ManifoldExpr, ...]:
		return (self.base,)

	def curves(self) -> List[FreeWord]:
		return [self.eta]

	def to_json(self) -> dict:
		return {
			"type": self.kind,
			"base": self.base.to_json(),
			"eta": str(self.eta),
			"knot": self.knot.to_json(),
			"bounds_disk": self.bounds_disk,
		}

	def __str__(self) -> str:
		return f'{self.base} |> infect({self.eta}, knot:"{self.knot.label}")'

class ConnectedSum(ManifoldExpr):
	"""M1 # M2. Generators of the left summand come first."""

	kind = "sum"

	def __init__(self, left: ManifoldExpr, right: ManifoldExpr):
		self.left = left
		self.right = right

	@property
	def rank(self) -> int:
		return self.left.rank + self.right.rank

	def children(self) -> Tuple[ManifoldExpr, ...]:
		return (self.left, self.right)

	def to_json(self) -> dict:
		return {"type": self.kind, "left": self.left.to_json(), "right": self.right.to_json()}

	def __str__(self) -> str:
		return f"{self.left} |> sum({self.right})"

class BoundaryLinkExpr(ManifoldExpr):
	"""
	The trivial m-component string link infected along a list of curves.

	With a single curve this is T(eta, K). It is a boundary link because
	every curve is a word in the meridians of the trivial link.
	"""

	kind = "boundary"

	def __init__(self, components: int, infections: Sequence[Tuple[FreeWord, SeifertMatrix]]):
		if components < 1:
			raise PreconditionError(f"A string link needs at least one component, got {components}.")
		for eta, _ in infections:
			_check_curve(eta, components, f"a {components}-component string link")
		self.components = components
		self.infections: Tuple[Tuple[FreeWord, SeifertMatrix], ...] = tuple(infections)

	@property
	def rank(self) -> int:
		return self.components

	def curves(self) -> List[FreeWord]:
		return [eta for eta, _ in self.infections]

	def to_json(self) -> dict:
		return {
			"type": self.kind,
			"components": self.components,
			"infections": [{"eta": str(eta), "knot": knot.to_json()} for eta, knot in self.infections],
		}

	def __str__(self) -> str:
		parts = "".join(f', {eta}:"{knot.label}"' for eta, knot in self.infections)
		return f"boundary({self.components}{parts})"

class BoundaryStack(ManifoldExpr):
	"""Closure of the product of boundary string links with the same number of components."""

	kind = "stack"

	def __init__(self, links: Sequence[BoundaryLinkExpr]):
		if not links:
			raise PreconditionError("A stack needs at least one string link.")
		components = {link.components for link in links}
		if len(components) != 1:
			raise RankMismatch(f"Stacked string links must have equal component counts, got {sorted(components)}.")
		self.links: Tuple[BoundaryLinkExpr, ...] = tuple(links)

	@property
	def rank(self) -> int:
		return self.links[0].components

	def children(self) -> Tuple[ManifoldExpr, ...]:
		return self.links

	def to_json(self) -> dict:
		return {"type": self.kind, "links": [link.to_json() for link in self.links]}

	def __str__(self) -> str:
		return "stack(" + ", ".join(str(link) for link in self.links) + ")"

def local_knot(components: int, index: int, knot: SeifertMatrix) -> Infect:
	"""Tie K into component `index` of the trivial link: infection along a meridian."""
	meridian = FreeWord.generator(components, index)
	return Infect(TrivialLinkSurgery(components), meridian, knot)

def expr_from_json(data: dict) -> ManifoldExpr:
	"""Inverse of ManifoldExpr.to_json. Assumes the shape was checked against the schema."""
	try:
		kind = data["type"]
		if kind == "trivial":
			return TrivialLinkSurgery(int(data["components"]))
		if kind == "knot":
			return KnotSurgery(_knot_from_json(data["knot"]))
		if kind == "infect":
			base = expr_from_json(data["base"])
			eta = parse_word(data["eta"], base.rank)
			return Infect(base, eta, _knot_from_json(data["knot"]), bool(data.get("bounds_disk", True)))
		if kind == "sum":
			return ConnectedSum(expr_from_json(data["left"]), expr_from_json(data["right"]))
		if kind == "boundary":
			components = int(data["components"])
			infections = [
				(parse_word(item["eta"], components), _knot_from_json(item["knot"]))
				for item in data["infections"]
			]
			return BoundaryLinkExpr(components, infections)
		if kind == "stack":
			links = [expr_from_json(item) for item in data["links"]]
			if not all(isinstance(link, BoundaryLinkExpr) for link in links):
				raise ParseError("Only boundary string links can be stacked.")
			return BoundaryStack(links)
	except (KeyError, TypeError) as error:
		raise ParseError(f"Malformed expression JSON: {error}") from error
	raise ParseError(f"Unknown expression type {kind!r}.")

def _knot_from_json(data) -> SeifertMatrix:
	if isinstance(data, str):
		return knot_factories.lookup(data)
	return SeifertMatrix(data["matrix"], name=data.get("name"))

def infect_chain(base: ManifoldExpr, infections: Iterable[Tuple[FreeWord, SeifertMatrix]]) -> ManifoldExpr:
	"""Apply several infections in order."""
	expr = base
	for eta, knot in infections:
		expr = Infect(expr, eta, knot)
	return expr
