"""
Normal forms in the free solvable quotients F/F^(n) of a free group.

An element of F/F^(n) for n >= 1 is stored as its image in F/F^(n-1) (the
shadow) together with its Fox derivatives evaluated in Z[F/F^(n-1)]. Products
follow the Fox product rule

	(s, a) (t, b) = (st, a + s.b)

where s.b translates every group ring coordinate of b on the left by s.
F/F^(0) is the trivial group and F/F^(1) is the abelianization.
"""
from __future__ import annotations

import logging

from typing import Dict, List, Optional, Sequence, Tuple

from freegroup import FreeGroupRingElement, FreeWord
from verdicts import DepthKind

LOGGER = logging.getLogger(__name__)

class SolvableElement:
	def __init__(
		self,
		level: int,
		rank: int,
		shadow: Optional[SolvableElement] = None,
		fox: Sequence[GroupRingElement] = (),
	):
		self.level = level
		self.rank = rank
		self.shadow = shadow
		self.fox: Tuple[GroupRingElement, ...] = tuple(fox)
		if level and (shadow is None or len(self.fox) != rank):
			raise ValueError("elements above level 0 need a shadow and one coordinate per generator")
		self._hash: Optional[int] = None

	@classmethod
	def identity(cls, level: int, rank: int) -> SolvableElement:
		if level == 0:
			return cls(0, rank)
		zero = GroupRingElement(level - 1, rank)
		return cls(level, rank, cls.identity(level - 1, rank), [zero] * rank)

	@classmethod
	def letter(cls, level: int, rank: int, index: int, sign: int) -> SolvableElement:
		"""Image of x_index^sign."""
		return cls.identity(level, rank).times_letter(index, sign)

	@property
	def is_identity(self) -> bool:
		if self.level == 0:
			return True
		return all(coord.is_zero for coord in self.fox) and self.shadow.is_identity

	def times_letter(self, index: int, sign: int) -> SolvableElement:
		"""Right multiplication by x_index^sign."""
		if self.level == 0:
			return self
		shadow = self.shadow.times_letter(index, sign)
		# d(w x) = dw + w, d(w x^-1) = dw - w x^-1
		key = self.shadow if sign > 0 else shadow
		fox = list(self.fox)
		fox[index - 1] = fox[index - 1] + GroupRingElement.of(key, sign)
		return SolvableElement(self.level, self.rank, shadow, fox)

	def __mul__(self, other: SolvableElement) -> SolvableElement:
		self._check_compatible(other)
		if self.level == 0:
			return self
		fox = [a + b.translate(self.shadow) for a, b in zip(self.fox, other.fox)]
		return SolvableElement(self.level, self.rank, self.shadow * other.shadow, fox)

	def inverse(self) -> SolvableElement:
		if self.level == 0:
			return self
		shadow = self.shadow.inverse()
		return SolvableElement(self.level, self.rank, shadow, [-a.translate(shadow) for a in self.fox])

	def _check_compatible(self, other: SolvableElement) -> None:
		if (self.level, self.rank) != (other.level, other.rank):
			raise ValueError(
				f"Cannot combine elements of F{self.rank}/F^({self.level}) and F{other.rank}/F^({other.level})."
			)

	def exponent_vector(self) -> Tuple[int, ...]:
		"""Exponent sums, read off at level 1."""
		element = self
		while element.level > 1:
			element = element.shadow
		if element.level == 0:
			return (0,) * self.rank
		return tuple(coord.augmentation() for coord in element.fox)

	def sort_key(self) -> Tuple:
		if self.level == 0:
			return ()
		return (self.shadow.sort_key(), tuple(coord.sort_key() for coord in self.fox))

	def to_json(self):
		if self.level == 0:
			return "1"
		return {
			"shadow": self.shadow.to_json(),
			"fox": [coord.to_json() for coord in self.fox],
		}

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, SolvableElement):
			return NotImplemented
		return (
			self.level == other.level
			and self.rank == other.rank
			and hash(self) == hash(other)
			and self.fox == other.fox
			and self.shadow == other.shadow
		)

	def __hash__(self) -> int:
		if self._hash is None:
			self._hash = hash((self.level, self.rank, self.shadow, self.fox))
		return self._hash

	def __repr__(self) -> str:
		if self.level <= 1:
			return f"SolvableElement(level={self.level}, exponents={self.exponent_vector()})"
		return f"SolvableElement(level={self.level}, shadow={self.shadow!r})"

class GroupRingElement:
	"""Finite integer combination of elements of F/F^(level); zero coefficients are never stored."""

	def __init__(self, level: int, rank: int, terms: Optional[Dict[SolvableElement, int]] = None):
		self.level = level
		self.rank = rank
		self.terms: Dict[SolvableElement, int] = {
			key: coeff for key, coeff in (terms or {}).items() if coeff
		}
		self._hash: Optional[int] = None

	@classmethod
	def of(cls, key: SolvableElement, coeff: int = 1) -> GroupRingElement:
		return cls(key.level, key.rank, {key: coeff})

	@classmethod
	def one(cls, level: int, rank: int) -> GroupRingElement:
		return cls.of(SolvableElement.identity(level, rank))

	@property
	def is_zero(self) -> bool:
		return not self.terms

	def augmentation(self) -> int:
		return sum(self.terms.values())

	def translate(self, by: SolvableElement) -> GroupRingElement:
		"""Left multiplication of every key by `by`."""
		if by.is_identity:
			return self
		return GroupRingElement(self.level, self.rank, {by * key: coeff for key, coeff in self.terms.items()})

	def __add__(self, other: GroupRingElement) -> GroupRingElement:
		if not other.terms:
			return self
		terms = dict(self.terms)
		for key, coeff in other.terms.items():
			terms[key] = terms.get(key, 0) + coeff
		return GroupRingElement(self.level, self.rank, terms)

	def __neg__(self) -> GroupRingElement:
		return GroupRingElement(self.level, self.rank, {key: -coeff for key, coeff in self.terms.items()})

	def __sub__(self, other: GroupRingElement) -> GroupRingElement:
		return self + (-other)

	def __mul__(self, other: GroupRingElement) -> GroupRingElement:
		terms: Dict[SolvableElement, int] = {}
		for u, a in self.terms.items():
			for v, b in other.terms.items():
				key = u * v
				terms[key] = terms.get(key, 0) + a * b
		return GroupRingElement(self.level, self.rank, terms)

	def scale(self, factor: int) -> GroupRingElement:
		return GroupRingElement(self.level, self.rank, {key: coeff * factor for key, coeff in self.terms.items()})

	def canonical_terms(self) -> List[Tuple[SolvableElement, int]]:
		return sorted(self.terms.items(), key=lambda item: item[0].sort_key())

	def sort_key(self) -> Tuple:
		return tuple((key.sort_key(), coeff) for key, coeff in self.canonical_terms())

	def to_json(self) -> list:
		return [{"coeff": coeff, "element": key.to_json()} for key, coeff in self.canonical_terms()]

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, GroupRingElement):
			return NotImplemented
		return self.level == other.level and self.terms == other.terms

	def __hash__(self) -> int:
		if self._hash is None:
			self._hash = hash(frozenset(self.terms.items()))
		return self._hash

	def __repr__(self) -> str:
		return f"GroupRingElement(level={self.level}, terms={len(self.terms)})"

def project_to_solvable(w: FreeWord, n: int) -> SolvableElement:
	"""Image of w in F/F^(n)."""
	if n < 0:
		raise ValueError(f"Derived series levels start at 0, got {n}.")
	element = SolvableElement.identity(n, w.rank)
	for index, sign in w.letters:
		element = element.times_letter(index, sign)
	return element

def evaluate(element: FreeGroupRingElement, n: int) -> GroupRingElement:
	"""Image of a free group ring element in Z[F/F^(n)]."""
	result = GroupRingElement(n, element.rank)
	for word, coeff in element.terms.items():
		result = result + GroupRingElement.of(project_to_solvable(word, n), coeff)
	return result

def shadows(element: SolvableElement) -> List[SolvableElement]:
	"""The images of one element at levels 0, 1, ..., element.level."""
	chain = [element]
	while chain[-1].level:
		chain.append(chain[-1].shadow)
	return list(reversed(chain))

class DerivedDepth:
	"""Where a word sits in the derived series: the n with w in F^(n) - F^(n+1)."""

	def __init__(self, kind: DepthKind, depth: Optional[int], max_n: int):
		self.kind = kind
		self.depth = depth
		self.max_n = max_n

	@property
	def is_exact(self) -> bool:
		return self.kind is DepthKind.EXACT

	def to_json(self) -> dict:
		payload: dict = {"kind": self.kind.value, "max_n": self.max_n}
		if self.kind is DepthKind.EXACT:
			payload["depth"] = self.depth
		elif self.kind is DepthKind.EXCEEDS:
			payload["at_least"] = self.max_n + 1
		return payload

	def __eq__(self, other: object) -> bool:
		if isinstance(other, int):
			return self.kind is DepthKind.EXACT and self.depth == other
		if not isinstance(other, DerivedDepth):
			return NotImplemented
		return (self.kind, self.depth) == (other.kind, other.depth)

	def __hash__(self) -> int:
		return hash((self.kind, self.depth))

	def __str__(self) -> str:
		if self.kind is DepthKind.EXACT:
			return str(self.depth)
		if self.kind is DepthKind.EXCEEDS:
			return f">={self.max_n + 1}"
		return "identity"

	def __repr__(self) -> str:
		return f"DerivedDepth({self})"

def derived_depth(w: FreeWord, max_n: int) -> DerivedDepth:
	"""
	The unique n <= max_n with w in F^(n) - F^(n+1).

	The word is projected once to level max_n + 1; the lower levels are its shadows.
	"""
	if w.is_identity:
		return DerivedDepth(DepthKind.IDENTITY, None, max_n)
	chain = shadows(project_to_solvable(w, max_n + 1))
	for level, element in enumerate(chain):
		if not element.is_identity:
			LOGGER.debug("depth of %s is %d", w, level - 1)
			return DerivedDepth(DepthKind.EXACT, level - 1, max_n)
	return DerivedDepth(DepthKind.EXCEEDS, None, max_n)
