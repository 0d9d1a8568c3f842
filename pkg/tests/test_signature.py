import itertools

from fractions import Fraction

import pytest
import sympy

import knot_factories

from exceptions import PreconditionError

from seifert import SeifertMatrix, connected_sum, mirror, t
from signature import (
	Rho0Value,
	circle_roots,
	compact_form,
	inertia,
	rho0,
	sampled_rho0,
	signature_at,
	signature_function,
	y,
)

trefoil = knot_factories.trefoil
figure8 = knot_factories.figure8
unknot = knot_factories.unknot

def test_compact_form():
	assert compact_form(sympy.Poly(t**2 - t + 1, t)) == sympy.Poly(y - 1, y)
	assert compact_form(sympy.Poly(t**2 - 3*t + 1, t)) == sympy.Poly(y - 3, y)

def test_inertia():
	assert inertia(sympy.Matrix([[2, 0], [0, -3]])) == (1, 1, 0)
	assert inertia(sympy.Matrix([[1, 1], [1, 1]])) == (1, 0, 1)
	assert inertia(sympy.Matrix([[-4, 2], [2, -4]])) == (0, 2, 0)

def test_circle_roots():
	assert circle_roots(unknot) == []
	assert circle_roots(figure8) == []
	roots = circle_roots(trefoil)
	assert len(roots) == 2
	assert roots[0].contains(Fraction(1, 6))
	assert roots[1].contains(Fraction(5, 6))

def test_circle_roots_twist_knot():
	roots = circle_roots(knot_factories.twist(-2))
	assert len(roots) == 2
	lo, hi = roots[0].lo, roots[0].hi
	assert lo < hi
	assert abs(float(lo) - 0.1150267) < 1e-6
	assert roots[1].lo == 1 - roots[0].hi

def test_trefoil_signature_function():
	function = signature_function(trefoil)
	assert function.values == [-2, 0]
	assert function.value_at(0.5) == -2
	assert function.value_at(1 / 12) == 0
	assert function.value_at(Fraction(1, 6)) is None
	assert function.to_json() == {
		"breakpoints": [{"lo": "1/6", "hi": "1/6"}, {"lo": "5/6", "hi": "5/6"}],
		"values": [-2, 0],
	}

def test_trivial_signature_functions():
	assert signature_function(unknot).values == [0]
	assert signature_function(figure8).values == [0]
	assert signature_function(figure8).breakpoints == []

def test_rho0_exact_values():
	assert rho0(unknot) == Rho0Value.zero()
	assert rho0(trefoil) == Rho0Value(Fraction(-4, 3))
	assert rho0(trefoil).is_exact
	assert rho0(figure8).value == 0
	assert rho0(mirror(trefoil)).value == Fraction(4, 3)

def test_rho0_twist_knots():
	expected = {-2: -1.5399, -3: -1.6271, -4: -1.6783}
	for k, value in expected.items():
		result = rho0(knot_factories.twist(k), 1e-12)
		assert abs(float(result.value) - value) < 1e-4
		assert result.error_bound <= Fraction(1e-12)
		assert result.is_certainly_nonzero()

def test_rho0_tolerance_is_met():
	result = rho0(knot_factories.twist(-3), 1e-20)
	assert result.error_bound <= Fraction(1e-20)
	assert result.close_to(rho0(knot_factories.twist(-3), 1e-6))

@pytest.mark.parametrize("k", [-2, -3])
def test_rho0_reaches_tolerances_finer_than_default_digits(k):
	result = rho0(knot_factories.twist(k), 1e-60)
	assert 0 < result.error_bound <= Fraction(1e-60)
	assert result.close_to(rho0(knot_factories.twist(k), 1e-12))

@pytest.mark.parametrize("tolerance", [0.0, -1.0, float("nan"), float("inf")])
def test_rho0_rejects_bad_tolerances(tolerance):
	with pytest.raises(PreconditionError):
		rho0(trefoil, tolerance)

def test_breakpoints_without_jumps_are_kept():
	# trefoil # mirror(trefoil): both roots are breakpoints, the value is 0 everywhere
	function = signature_function(connected_sum(trefoil, mirror(trefoil)))
	assert function.values == [0, 0]
	assert function.jumps() == [0, 0]
	assert [(bp.lo, bp.hi) for bp in function.breakpoints] == [(bp.lo, bp.hi) for bp in circle_roots(trefoil)]
	assert function.integral() == Rho0Value.zero()

def test_dense_oracle_agrees():
	for knot in (unknot, trefoil, figure8, knot_factories.twist(-2)):
		assert abs(sampled_rho0(knot) - float(rho0(knot).value)) <= 1e-3

def test_dense_oracle_agrees_on_corpus(corpus):
	for V in corpus:
		assert abs(sampled_rho0(V) - float(rho0(V).value)) <= 1e-3

def test_signature_at():
	assert signature_at(trefoil, 0.5) == -2
	assert signature_at(trefoil, 0.05) == 0
	assert signature_at(unknot, 0.3) == 0

def test_corpus_signature_invariants(corpus):
	for V in corpus:
		function = signature_function(V)
		values = function.values
		for value in values:
			assert value % 2 == 0
			assert abs(value) <= V.size
		# the arc through t = 0 is the last one
		assert values[-1] == 0
		breakpoints = function.breakpoints
		k = len(breakpoints)
		for i, bp in enumerate(breakpoints):
			assert bp.lo == 1 - breakpoints[k - 1 - i].hi
			assert 0 < bp.lo <= bp.hi < 1
		for j in range(k - 1):
			assert values[j] == values[k - 2 - j]
		roots = circle_roots(V)
		for bp in breakpoints:
			assert any(root.lo <= bp.hi and bp.lo <= root.hi for root in roots)

def test_breakpoints_increase(corpus):
	for V in corpus:
		breakpoints = signature_function(V).breakpoints
		for a, b in zip(breakpoints, breakpoints[1:]):
			assert a.hi < b.lo

def test_rho0_is_additive(corpus):
	for a, b in itertools.combinations(corpus, 2):
		assert rho0(connected_sum(a, b)).close_to(rho0(a) + rho0(b))

def mixed_sum(a, b):
	"""P^T (a + b) P with P = I + E_{0,k}, so the result no longer splits into blocks."""
	V = connected_sum(a, b).matrix()
	P = sympy.eye(V.rows)
	P[0, a.size] = 1
	return SeifertMatrix((P.T * V * P).tolist())

def test_rho0_is_additive_without_block_splitting(corpus):
	small = [V for V in corpus if V.genus == 1][:8]
	pairs = list(itertools.combinations(small, 2)) + [
		(trefoil, knot_factories.twist(-2)),
		(knot_factories.twist(-2), knot_factories.twist(-3)),
		(figure8, knot_factories.twist(-4)),
	]
	for a, b in pairs:
		V = mixed_sum(a, b)
		assert len(V.blocks()) == 1
		assert rho0(V).close_to(rho0(a) + rho0(b))

def test_rho0_mirror_negates(corpus):
	for V in corpus:
		assert rho0(mirror(V)).close_to(-rho0(V))

def test_slice_sums_vanish(corpus):
	for V in list(corpus[:9]) + [trefoil]:
		result = rho0(connected_sum(V, mirror(V)))
		assert abs(float(result.value)) <= 2e-9

def test_sample_grid():
	samples = signature_function(trefoil).sample(4)
	assert samples == [(0.0, 0), (0.25, -2), (0.5, -2), (0.75, -2)]
