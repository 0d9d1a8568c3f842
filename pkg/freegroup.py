"""Words in the free group on x1..xm, their Fox derivatives, and the word syntax."""
from __future__ import annotations

import functools
import logging

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np # type: ignore
import pyparsing as pp
from sympy.combinatorics.free_groups import FreeGroup, FreeGroupElement, free_group

import settings

from exceptions import ParseError, RankMismatch

LOGGER = logging.getLogger(__name__)

Letter = Tuple[int, int]

@functools.lru_cache(maxsize=None)
def group_of_rank(rank: int) -> FreeGroup:
	if rank < 1:
		raise RankMismatch(f"A free group needs rank >= 1, got {rank}.")
	group = free_group(", ".join(f"x{i}" for i in range(1, rank + 1)))[0]
	return group

class FreeWord:
	"""A freely reduced word in the generators x1..x{rank}."""

	def __init__(self, rank: int, element: FreeGroupElement):
		self.rank = rank
		self.element = element
		symbols = group_of_rank(rank).symbols
		letters: List[Letter] = []
		for symbol, exponent in element.array_form:
			index = symbols.index(symbol) + 1
			sign = 1 if exponent > 0 else -1
			letters.extend([(index, sign)] * abs(exponent))
		self.letters: Tuple[Letter, ...] = tuple(letters)

	@classmethod
	def identity(cls, rank: int) -> FreeWord:
		return cls(rank, group_of_rank(rank).identity)

	@classmethod
	def generator(cls, rank: int, index: int, exponent: int = 1) -> FreeWord:
		return free_reduce([(index, 1 if exponent > 0 else -1)] * abs(exponent), rank)

	@property
	def is_identity(self) -> bool:
		return not self.letters

	def exponent_sum(self, index: int) -> int:
		return sum(sign for i, sign in self.letters if i == index)

	def inverse(self) -> FreeWord:
		return FreeWord(self.rank, self.element.inverse())

	def conjugate(self, by: FreeWord) -> FreeWord:
		"""by^-1 self by"""
		return by.inverse() * self * by

	def _check_rank(self, other: FreeWord) -> None:
		if self.rank != other.rank:
			raise RankMismatch(f"Words of rank {self.rank} and {other.rank} cannot be combined.")

	def __mul__(self, other: FreeWord) -> FreeWord:
		self._check_rank(other)
		return FreeWord(self.rank, self.element * other.element)

	def __pow__(self, exponent: int) -> FreeWord:
		return FreeWord(self.rank, self.element ** exponent)

	def __len__(self) -> int:
		return len(self.letters)

	def __iter__(self):
		return iter(self.letters)

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, FreeWord):
			return NotImplemented
		return self.rank == other.rank and self.letters == other.letters

	def __hash__(self) -> int:
		return hash((self.rank, self.letters))

	def sort_key(self) -> Tuple:
		return (len(self.letters), self.letters)

	def __str__(self) -> str:
		if not self.letters:
			return "1"
		syllables = []
		for symbol, exponent in self.element.array_form:
			syllables.append(str(symbol) if exponent == 1 else f"{symbol}^{exponent}")
		return " ".join(syllables)

	def __repr__(self) -> str:
		return f"FreeWord({self}, rank={self.rank})"

def free_reduce(letters: Iterable[Letter], rank: int) -> FreeWord:
	"""Multiply out a letter sequence; sympy cancels adjacent inverse pairs."""
	group = group_of_rank(rank)
	generators = group.generators
	element = group.identity
	for index, sign in letters:
		if not 1 <= index <= rank:
			raise RankMismatch(f"Generator x{index} is out of range for rank {rank}.")
		if sign not in (1, -1):
			raise ValueError(f"Letter exponent must be +-1, got {sign}.")
		element = element * generators[index - 1] ** sign
	return FreeWord(rank, element)

def commutator(u: FreeWord, v: FreeWord) -> FreeWord:
	"""[u, v] = u^-1 v^-1 u v"""
	u._check_rank(v)
	return u.inverse() * v.inverse() * u * v

def random_word(rng: np.random.Generator, rank: int, length: int) -> FreeWord:
	"""A reduced word from `length` uniformly random letters (reduction may shorten it)."""
	indices = rng.integers(1, rank + 1, size=length)
	signs = rng.choice([-1, 1], size=length)
	return free_reduce(zip((int(i) for i in indices), (int(s) for s in signs)), rank)

class FreeGroupRingElement:
	"""An integer combination of free group words, kept unevaluated."""

	def __init__(self, rank: int, terms: Optional[Dict[FreeWord, int]] = None):
		self.rank = rank
		self.terms: Dict[FreeWord, int] = {
			word: coeff for word, coeff in (terms or {}).items() if coeff
		}

	@classmethod
	def of(cls, word: FreeWord, coeff: int = 1) -> FreeGroupRingElement:
		return cls(word.rank, {word: coeff})

	def __add__(self, other: FreeGroupRingElement) -> FreeGroupRingElement:
		terms = dict(self.terms)
		for word, coeff in other.terms.items():
			terms[word] = terms.get(word, 0) + coeff
		return FreeGroupRingElement(self.rank, terms)

	def __neg__(self) -> FreeGroupRingElement:
		return FreeGroupRingElement(self.rank, {w: -c for w, c in self.terms.items()})

	def __sub__(self, other: FreeGroupRingElement) -> FreeGroupRingElement:
		return self + (-other)

	def __mul__(self, other: FreeGroupRingElement) -> FreeGroupRingElement:
		result = FreeGroupRingElement(self.rank)
		for u, a in self.terms.items():
			for v, b in other.terms.items():
				result = result + FreeGroupRingElement.of(u * v, a * b)
		return result

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, FreeGroupRingElement):
			return NotImplemented
		return self.terms == other.terms

	def __hash__(self) -> int:
		return hash(frozenset(self.terms.items()))

	def evaluate(self, n: int):
		"""Image in the group ring of the free solvable quotient F/F^(n)."""
		from solvable import evaluate

		return evaluate(self, n)

	def __str__(self) -> str:
		if not self.terms:
			return "0"
		parts = []
		for word in sorted(self.terms, key=FreeWord.sort_key):
			parts.append(f"{self.terms[word]}*({word})")
		return " + ".join(parts)

def fox_derivative(w: FreeWord, index: int) -> FreeGroupRingElement:
	"""
	The Fox derivative dw/dx_index.

	Uses d(uv) = du + u dv, dx_j = delta_ij and dx_j^-1 = -delta_ij x_j^-1.
	"""
	if not 1 <= index <= w.rank:
		raise RankMismatch(f"Generator x{index} is out of range for rank {w.rank}.")
	terms: Dict[FreeWord, int] = {}
	prefix = FreeWord.identity(w.rank)
	for letter, sign in w.letters:
		step = FreeWord.generator(w.rank, letter, sign)
		if letter == index:
			term = prefix if sign > 0 else prefix * step
			terms[term] = terms.get(term, 0) + sign
		prefix = prefix * step
	return FreeGroupRingElement(w.rank, terms)

# --Word syntax--

class _Letters:
	"""Unreduced letters produced while parsing."""

	def __init__(self, letters: Sequence[Letter]):
		self.letters = tuple(letters)

	def inverse(self) -> _Letters:
		return _Letters([(i, -s) for i, s in reversed(self.letters)])

	def power(self, exponent: int) -> _Letters:
		base = self if exponent >= 0 else self.inverse()
		return _Letters(base.letters * abs(exponent))

	def commutator(self, other: _Letters) -> _Letters:
		return _Letters(self.inverse().letters + other.inverse().letters + self.letters + other.letters)

	@classmethod
	def concat(cls, parts: Iterable[_Letters]) -> _Letters:
		letters: List[Letter] = []
		for part in parts:
			letters.extend(part.letters)
		return cls(letters)

def _build_word_grammar() -> pp.ParserElement:
	word = pp.Forward()
	integer = pp.Regex(r"[+-]?\d+")
	generator = pp.Regex(r"x\d+").set_parse_action(lambda toks: _Letters([(int(toks[0][1:]), 1)]))
	identity = pp.Literal("1").set_parse_action(lambda toks: _Letters([]))
	bracket = (pp.Suppress("[") + word + pp.Suppress(",") + word + pp.Suppress("]")).set_parse_action(
		lambda toks: toks[0].commutator(toks[1])
	)
	paren = (pp.Suppress("(") + word + pp.Suppress(")")).set_parse_action(lambda toks: toks[0])
	atom = generator | bracket | paren | identity
	term = (atom + pp.Optional(pp.Suppress("^") + integer)).set_parse_action(
		lambda toks: toks[0].power(int(toks[1])) if len(toks) > 1 else toks[0]
	)
	word <<= pp.OneOrMore(term).set_parse_action(lambda toks: _Letters.concat(toks))
	return word

WORD = _build_word_grammar()

def max_generator(letters: _Letters) -> int:
	return max((i for i, _ in letters.letters), default=1)

def word_from_letters(letters: _Letters, rank: Optional[int], text: str) -> FreeWord:
	if rank is None:
		rank = max_generator(letters)
	word = free_reduce(letters.letters, rank)
	if len(word) > settings.MAX_WORD_LENGTH:
		raise ParseError(
			f"Word {text!r} has reduced length {len(word)}, above the limit {settings.MAX_WORD_LENGTH}."
		)
	return word

def parse_word(text: str, rank: Optional[int] = None) -> FreeWord:
	"""
	Parse words such as "x1 x2^-1 [x1,x2]".

	Brackets nest and denote u^-1 v^-1 u v. Without `rank` the largest
	generator index is used.
	"""
	try:
		letters = WORD.parse_string(text, parse_all=True)[0]
	except pp.ParseException as error:
		raise ParseError(f"Cannot parse word {text!r}: {error}") from error
	return word_from_letters(letters, rank, text)
