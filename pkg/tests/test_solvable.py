import collections

import numpy as np # type: ignore

from families import canonical_curve
from freegroup import FreeWord, commutator, fox_derivative, parse_word, random_word
from solvable import (
	GroupRingElement,
	SolvableElement,
	derived_depth,
	evaluate,
	project_to_solvable,
	shadows,
)
from verdicts import DepthKind

def _abelian_fox(w):
	"""Exponent sums and Fox derivatives of w in Z[t1^+-1, ..., tm^+-1], from scratch."""
	prefix = [0] * w.rank
	derivatives = [collections.Counter() for _ in range(w.rank)]
	for index, sign in w.letters:
		if sign > 0:
			derivatives[index - 1][tuple(prefix)] += 1
			prefix[index - 1] += 1
		else:
			prefix[index - 1] -= 1
			derivatives[index - 1][tuple(prefix)] -= 1
	return prefix, [{key: c for key, c in d.items() if c} for d in derivatives]

def _in_second_derived(w) -> bool:
	exponents, derivatives = _abelian_fox(w)
	return not any(exponents) and not any(derivatives)

def _random_words(count: int, seed: int):
	rng = np.random.default_rng(seed)
	words = []
	for i in range(count):
		if i % 3 == 2:
			a, b, c, d = (random_word(rng, 2, int(rng.integers(1, 4))) for _ in range(4))
			words.append(commutator(commutator(a, b), commutator(c, d)))
		else:
			words.append(random_word(rng, 2, int(rng.integers(0, 13))))
	return words

def test_depth_of_letters_and_commutators():
	assert derived_depth(parse_word("x1"), 3) == 0
	assert derived_depth(parse_word("x1 x2^-1"), 3) == 0
	assert derived_depth(parse_word("[x1,x2]"), 4) == 1
	assert derived_depth(parse_word("[[x1,x2],[x1,x3]]"), 3) == 2
	assert derived_depth(parse_word("[x1,x2] [x2,x1]"), 3).kind is DepthKind.IDENTITY

def test_depth_exceeds_max_n():
	result = derived_depth(parse_word("[[x1,x2],[x3,x4]]"), 1)
	assert result.kind is DepthKind.EXCEEDS
	assert result.to_json() == {"kind": "exceeds", "max_n": 1, "at_least": 2}
	assert str(result) == ">=2"

def test_depth_json():
	assert derived_depth(parse_word("[x1,x2]"), 4).to_json() == {"kind": "exact", "max_n": 4, "depth": 1}

def test_canonical_curves_have_their_depth():
	assert derived_depth(canonical_curve(1, 2), 3) == 1
	assert derived_depth(canonical_curve(2, 2), 3) == 2
	assert derived_depth(canonical_curve(2, 4), 3) == 2
	assert derived_depth(canonical_curve(3, 2), 3) == 3

def test_level_zero_and_one():
	w = parse_word("x1^2 x2^-1 x1")
	assert project_to_solvable(w, 0).is_identity
	assert project_to_solvable(w, 0).to_json() == "1"
	assert project_to_solvable(w, 1).exponent_vector() == (3, -1)
	assert project_to_solvable(parse_word("[x1,x2]"), 1).is_identity

def test_projection_is_a_homomorphism():
	rng = np.random.default_rng(8)
	for _ in range(500):
		u = random_word(rng, 2, int(rng.integers(0, 7)))
		v = random_word(rng, 2, int(rng.integers(0, 7)))
		for n in (1, 2, 3):
			assert project_to_solvable(u * v, n) == project_to_solvable(u, n) * project_to_solvable(v, n)
			assert project_to_solvable(u.inverse(), n) == project_to_solvable(u, n).inverse()

def test_second_derived_membership_matches_laurent_oracle():
	words = _random_words(100, 17)
	assert any(_in_second_derived(w) for w in words)
	for w in words:
		assert project_to_solvable(w, 2).is_identity == _in_second_derived(w)

def test_shadows():
	element = project_to_solvable(parse_word("[x1,x2]"), 3)
	chain = shadows(element)
	assert [e.level for e in chain] == [0, 1, 2, 3]
	assert chain[1].is_identity
	assert not chain[2].is_identity

def test_evaluated_fox_derivative():
	c = parse_word("[x1,x2]")
	d1 = evaluate(fox_derivative(c, 1), 1)
	assert d1.augmentation() == 0
	assert d1 == fox_derivative(c, 1).evaluate(1)
	# the Fox coordinates of [x1,x2] at level 2 are its abelianized derivatives
	element = project_to_solvable(c, 2)
	assert element.fox[0] == d1

def test_group_ring_element():
	x = SolvableElement.letter(1, 2, 1, 1)
	one = GroupRingElement.one(1, 2)
	a = GroupRingElement.of(x, 2) - one
	assert a.augmentation() == 1
	assert (a - a).is_zero
	assert (a * one) == a
	assert a.scale(3).augmentation() == 3
	assert a.translate(x) == GroupRingElement.of(x * x, 2) - GroupRingElement.of(x)

def test_identity_word_at_every_level():
	for n in range(4):
		assert project_to_solvable(FreeWord.identity(2), n).is_identity

def _at_least(result, n) -> bool:
	if result.kind is DepthKind.EXACT:
		return result.depth >= n
	return True

def test_depth_is_conjugation_invariant():
	rng = np.random.default_rng(21)
	curves = [parse_word("x1 x2"), parse_word("[x1,x2]"), canonical_curve(2, 2)] + _random_words(12, 5)
	for w in curves:
		for _ in range(3):
			by = random_word(rng, 2, int(rng.integers(1, 5)))
			assert derived_depth(w.conjugate(by), 3) == derived_depth(w, 3)

def test_commutators_go_one_level_deeper():
	rng = np.random.default_rng(34)

	def deep_word(n):
		if n == 0:
			return random_word(rng, 2, int(rng.integers(1, 4)))
		return commutator(deep_word(n - 1), deep_word(n - 1))

	for n in (0, 1):
		for _ in range(20):
			u, v = deep_word(n), deep_word(n)
			assert _at_least(derived_depth(u, 2), n)
			assert _at_least(derived_depth(v, 2), n)
			assert _at_least(derived_depth(commutator(u, v), 2), n + 1)

def test_fox_fundamental_identity_in_solvable_quotients():
	rng = np.random.default_rng(55)
	for n in (0, 1, 2):
		one = GroupRingElement.one(n, 3)
		for _ in range(15):
			w = random_word(rng, 3, int(rng.integers(0, 9)))
			total = GroupRingElement(n, 3)
			for i in range(1, 4):
				generator = GroupRingElement.of(SolvableElement.letter(n, 3, i, 1))
				total = total + evaluate(fox_derivative(w, i), n) * (generator - one)
			assert total == GroupRingElement.of(project_to_solvable(w, n)) - one

def _random_ring_element(rng, n):
	element = GroupRingElement(n, 2)
	while element.is_zero:
		for _ in range(int(rng.integers(1, 4))):
			word = random_word(rng, 2, int(rng.integers(0, 5)))
			coeff = int(rng.choice([-2, -1, 1, 2]))
			element = element + GroupRingElement.of(project_to_solvable(word, n), coeff)
	return element

def test_group_ring_axioms():
	rng = np.random.default_rng(89)
	for n in (1, 2):
		for _ in range(10):
			a, b, c = (_random_ring_element(rng, n) for _ in range(3))
			assert (a * b) * c == a * (b * c)
			assert a * (b + c) == a * b + a * c
			assert (a + b) * c == a * c + b * c
			assert not (a * b).is_zero
