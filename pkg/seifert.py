"""Integer Seifert matrices and the polynomial data they carry."""
from __future__ import annotations

import logging

from typing import Iterable, List, Optional, Sequence

import numpy as np # type: ignore
import sympy

from exceptions import InvalidSeifertMatrix

LOGGER = logging.getLogger(__name__)

t = sympy.Symbol("t")

class SeifertMatrix:
	"""
	A square integer matrix V of even size with det(V - V^T) = 1.

	The 0x0 matrix is the unknot.
	"""

	def __init__(self, entries: Sequence[Sequence[int]], name: Optional[str] = None):
		rows = [tuple(int(x) for x in row) for row in entries]
		size = len(rows)
		if any(len(row) != size for row in rows):
			raise InvalidSeifertMatrix(f"Seifert matrix must be square, got rows of lengths {[len(r) for r in rows]}.")
		if size % 2:
			raise InvalidSeifertMatrix(f"Seifert matrix must have even size, got {size}.")
		self.entries = tuple(rows)
		self.name = name
		if self.det_antisymmetric() != 1:
			raise InvalidSeifertMatrix(
				f"det(V - V^T) = {self.det_antisymmetric()}, expected 1 for a knot."
			)

	@property
	def size(self) -> int:
		return len(self.entries)

	@property
	def genus(self) -> int:
		return self.size // 2

	@property
	def label(self) -> str:
		return self.name if self.name else f"V{list(map(list, self.entries))}"

	def matrix(self) -> sympy.Matrix:
		if not self.size:
			return sympy.zeros(0, 0)
		return sympy.Matrix(self.entries)

	def array(self) -> np.ndarray:
		return np.array(self.entries, dtype=np.int64).reshape(self.size, self.size)

	def det_antisymmetric(self) -> int:
		V = self.matrix()
		return int((V - V.T).det())

	def blocks(self) -> List[SeifertMatrix]:
		"""
		Split a block diagonal matrix (up to a simultaneous permutation) into its blocks.

		Each block again has det(V_b - V_b^T) = 1, so it presents a knot.
		"""
		size = self.size
		if not size:
			return []
		pattern = sympy.Matrix(
			size, size, lambda i, j: 1 if self.entries[i][j] or self.entries[j][i] else 0
		)
		groups = sorted(sorted(group) for group in pattern.connected_components())
		if len(groups) == 1:
			return [self]
		return [
			SeifertMatrix([[self.entries[i][j] for j in indices] for i in indices])
			for indices in groups
		]

	def rename(self, name: Optional[str]) -> SeifertMatrix:
		return SeifertMatrix(self.entries, name=name)

	def to_json(self) -> dict:
		return {"name": self.name, "matrix": [list(row) for row in self.entries]}

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, SeifertMatrix):
			return NotImplemented
		return self.entries == other.entries

	def __hash__(self) -> int:
		return hash(self.entries)

	def __repr__(self) -> str:
		return f"SeifertMatrix({self.label})"

def symmetrized_form(V: SeifertMatrix, omega: sympy.Expr) -> sympy.Matrix:
	"""Return (1 - omega) V + (1 - conj(omega)) V^T for a unit complex omega != 1."""
	omega = sympy.nsimplify(omega)
	if sympy.simplify(omega - 1) == 0:
		raise InvalidSeifertMatrix("omega = 1 makes the Levine-Tristram form vanish identically.")
	if sympy.simplify(omega * sympy.conjugate(omega) - 1) != 0:
		raise InvalidSeifertMatrix(f"omega = {omega} does not lie on the unit circle.")
	M = V.matrix()
	H = (1 - omega) * M + (1 - sympy.conjugate(omega)) * M.T
	return H.applyfunc(sympy.expand)

def alexander_polynomial(V: SeifertMatrix) -> sympy.Poly:
	"""det(V - t V^T), shifted to lowest exponent 0 with positive leading coefficient."""
	if not V.size:
		return sympy.Poly(1, t)
	blocks = V.blocks()
	if len(blocks) > 1:
		poly = sympy.Poly(1, t)
		for block in blocks:
			poly = poly * alexander_polynomial(block)
		return poly
	M = V.matrix()
	poly = sympy.Poly((M - t * M.T).det(method="berkowitz"), t)
	if poly.LC() < 0:
		poly = -poly
	lowest = min(monom[0] for monom in poly.monoms())
	if lowest:
		poly = sympy.Poly(sympy.expand(poly.as_expr() / t**lowest), t)
	return poly

def arf(V: SeifertMatrix) -> int:
	"""0 iff the Alexander polynomial at -1 is +-1 mod 8."""
	value = int(alexander_polynomial(V).eval(-1))
	return 0 if value % 8 in (1, 7) else 1

def connected_sum(V1: SeifertMatrix, V2: SeifertMatrix, name: Optional[str] = None) -> SeifertMatrix:
	n1, n2 = V1.size, V2.size
	rows: List[List[int]] = []
	for row in V1.entries:
		rows.append(list(row) + [0] * n2)
	for row in V2.entries:
		rows.append([0] * n1 + list(row))
	if name is None and V1.name and V2.name:
		name = f"{V1.name} # {V2.name}"
	return SeifertMatrix(rows, name=name)

def block_sum(matrices: Iterable[SeifertMatrix], name: Optional[str] = None) -> SeifertMatrix:
	result = SeifertMatrix([])
	for V in matrices:
		result = connected_sum(result, V)
	return result.rename(name) if name is not None else result

def mirror(V: SeifertMatrix) -> SeifertMatrix:
	"""-V^T. Negates the signature function pointwise."""
	size = V.size
	rows = [[-V.entries[j][i] for j in range(size)] for i in range(size)]
	name = None
	if V.name:
		name = V.name[len("mirror("):-1] if V.name.startswith("mirror(") else f"mirror({V.name})"
	return SeifertMatrix(rows, name=name)

def random_seifert_matrix(rng: np.random.Generator, genus: int = 1, bound: int = 5) -> SeifertMatrix:
	"""
	Block sum of `genus` matrices [[a, b + 1], [b, c]] with a, b, c in [-bound, bound].

	Each block has V - V^T = [[0, 1], [-1, 0]], so the sum always presents a knot.
	"""
	blocks = []
	for _ in range(genus):
		a, b, c = (int(x) for x in rng.integers(-bound, bound + 1, size=3))
		blocks.append(SeifertMatrix([[a, b + 1], [b, c]]))
	return block_sum(blocks)

def random_corpus(size: int, seed: int, max_genus: int = 2) -> List[SeifertMatrix]:
	rng = np.random.default_rng(seed)
	corpus = []
	for index in range(size):
		genus = int(rng.integers(1, max_genus + 1))
		corpus.append(random_seifert_matrix(rng, genus).rename(f"corpus[{index}]"))
	return corpus
