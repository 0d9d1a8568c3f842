from fractions import Fraction

import numpy as np # type: ignore
import pytest

import knot_factories

from exceptions import DepthOverflow, PreconditionError, RankMismatch
from expressions import (
	BoundaryLinkExpr,
	BoundaryStack,
	ConnectedSum,
	Infect,
	KnotSurgery,
	TrivialLinkSurgery,
	expr_from_json,
	infect_chain,
	local_knot,
)
from families import bing_double, canonical_curve, generate_family
from freegroup import parse_word, random_word
from rho_engine import RhoEngine, RhoVector, rho, rho_vector, slice_obstruction
from signature import Rho0Value, rho0
from solvable import derived_depth
from verdicts import ObstructionKind

ZERO = Rho0Value.zero()
trefoil = knot_factories.trefoil

def exact(value) -> Rho0Value:
	return Rho0Value(Fraction(value))

def test_trivial_link_is_zero(engine):
	vector = engine.rho_vector(TrivialLinkSurgery(3))
	assert vector == RhoVector.constant(ZERO)
	assert engine.slice_obstruction(TrivialLinkSurgery(3)).kind is ObstructionKind.INCONCLUSIVE

def test_knot_surgery_is_rho0(engine):
	expr = KnotSurgery(trefoil)
	assert engine.rho_vector(expr) == RhoVector.constant(exact(Fraction(-4, 3)))
	verdict = engine.slice_obstruction(expr)
	assert verdict.obstructed
	assert verdict.level == 0

def test_bing_double_of_trefoil(engine):
	expr = bing_double(trefoil).expr
	vector = engine.rho_vector(expr)
	assert vector == RhoVector([ZERO], exact(Fraction(-4, 3)))
	assert vector[0] == ZERO
	assert vector[5] == exact(Fraction(-4, 3))
	verdict = engine.slice_obstruction(expr)
	assert verdict.to_json() == {
		"verdict": "obstructed",
		"n": 1,
		"rho": {"value": "-4/3", "error_bound": "0"},
	}

def test_depth_two_family_member(engine):
	knot = knot_factories.lookup("trefoil # trefoil")
	[member] = generate_family(2, 2, [knot])
	assert engine.rho_vector(member) == RhoVector([ZERO, ZERO], exact(Fraction(-8, 3)))
	assert engine.rho(member, 1) == ZERO
	assert engine.rho(member, 2).value == Fraction(-8, 3)

def test_unknot_infection_is_neutral(engine):
	base = bing_double(trefoil).expr
	for text in ("x1", "x2^3", "[x1,x2]"):
		eta = parse_word(text, 2)
		assert engine.rho_vector(Infect(base, eta, knot_factories.unknot)) == engine.rho_vector(base)

def test_infections_commute(engine):
	base = TrivialLinkSurgery(3)
	first = (parse_word("[x1,x2]", 3), trefoil)
	second = (parse_word("[[x1,x2],[x1,x3]]", 3), knot_factories.twist(-2))
	one_way = infect_chain(base, [first, second])
	other_way = infect_chain(base, [second, first])
	assert engine.rho_vector(one_way) == engine.rho_vector(other_way)
	vector = engine.rho_vector(one_way)
	assert vector[0] == ZERO
	assert vector[1] == exact(Fraction(-4, 3))
	assert vector[2].close_to(exact(Fraction(-4, 3)) + engine.knot_rho0(knot_factories.twist(-2)))

def test_connected_sum_adds(engine):
	left = bing_double(trefoil).expr
	right = KnotSurgery(knot_factories.twist(-2))
	total = ConnectedSum(left, right)
	assert total.rank == 3
	assert engine.rho_vector(total) == engine.rho_vector(left) + engine.rho_vector(right)

def test_local_knot(engine):
	expr = local_knot(2, 1, trefoil)
	assert engine.rho_vector(expr) == RhoVector.constant(exact(Fraction(-4, 3)))
	assert engine.slice_obstruction(expr).level == 0

def test_stacking_adds(engine):
	eta = parse_word("[x1,x2]", 2)
	first = BoundaryLinkExpr(2, [(eta, trefoil)])
	second = BoundaryLinkExpr(2, [(eta, knot_factories.lookup("mirror(trefoil)"))])
	stacked = BoundaryStack([first, second])
	assert engine.rho_vector(stacked) == engine.rho_vector(first) + engine.rho_vector(second)
	assert engine.rho_vector(stacked) == RhoVector.constant(ZERO)
	assert engine.slice_obstruction(stacked).kind is ObstructionKind.INCONCLUSIVE

def test_stack_needs_equal_components():
	eta2 = parse_word("[x1,x2]", 2)
	eta3 = parse_word("[x1,x2]", 3)
	with pytest.raises(RankMismatch):
		BoundaryStack([BoundaryLinkExpr(2, [(eta2, trefoil)]), BoundaryLinkExpr(3, [(eta3, trefoil)])])

def test_infection_preconditions(engine):
	base = TrivialLinkSurgery(2)
	with pytest.raises(RankMismatch):
		Infect(base, parse_word("[x1,x2]", 3), trefoil)
	with pytest.raises(PreconditionError):
		Infect(base, parse_word("1", 2), trefoil)
	with pytest.raises(RankMismatch):
		Infect(KnotSurgery(trefoil), parse_word("[x1,x2]", 2), trefoil)
	unasserted = Infect(base, parse_word("[x1,x2]", 2), trefoil, bounds_disk=False)
	with pytest.raises(PreconditionError):
		engine.rho_vector(unasserted)

def test_depth_overflow():
	engine = RhoEngine(max_n=1)
	expr = Infect(TrivialLinkSurgery(3), parse_word("[[x1,x2],[x1,x3]]", 3), trefoil)
	with pytest.raises(DepthOverflow) as info:
		engine.rho_vector(expr)
	assert info.value.word == str(parse_word("[[x1,x2],[x1,x3]]", 3))
	assert info.value.exit_code == 4

def test_engine_limits():
	with pytest.raises(PreconditionError):
		RhoEngine(max_n=5)
	with pytest.raises(PreconditionError):
		RhoEngine().rho(TrivialLinkSurgery(1), -1)

def test_provenance_records_assumptions(engine):
	engine.rho_vector(bing_double(trefoil).expr)
	lines = engine.provenance.lines()
	assert any("caller-asserted" in line for line in lines)
	assert lines[0] == "[trivial-link] trivial(2) has rho_n = 0"

def test_memoized_per_node(engine):
	expr = bing_double(trefoil).expr
	assert engine.rho_vector(expr) is engine.rho_vector(expr)

def test_module_functions():
	expr = bing_double(trefoil).expr
	assert rho_vector(expr) == RhoVector([ZERO], exact(Fraction(-4, 3)))
	assert rho(expr, 0) == ZERO
	assert slice_obstruction(expr).level == 1

def test_expression_json(engine):
	expr = ConnectedSum(bing_double(trefoil).expr, KnotSurgery(knot_factories.figure8))
	rebuilt = expr_from_json(expr.to_json())
	assert str(rebuilt) == str(expr)
	assert engine.rho_vector(rebuilt) == engine.rho_vector(expr)

def test_rho_vector_helpers():
	vector = RhoVector([ZERO], exact(1))
	assert len(vector) == 1
	assert vector.padded(3).head == [ZERO, exact(1), exact(1)]
	assert vector == vector.padded(3)
	assert vector.with_increment(exact(2), 0) == RhoVector([exact(2)], exact(3))
	assert vector.to_json() == {
		"head": [{"value": "0", "error_bound": "0"}],
		"tail": {"value": "1", "error_bound": "0"},
	}

KNOTS = [
	knot_factories.unknot,
	trefoil,
	knot_factories.lookup("mirror(trefoil)"),
	knot_factories.figure8,
	knot_factories.twist(-2),
]

def _random_expr(rng, levels):
	kind = int(rng.integers(0, 3 if levels else 2))
	if kind == 0:
		expr = TrivialLinkSurgery(int(rng.integers(2, 4)))
	elif kind == 1:
		expr = KnotSurgery(KNOTS[int(rng.integers(len(KNOTS)))])
	else:
		expr = ConnectedSum(_random_expr(rng, levels - 1), _random_expr(rng, levels - 1))
	for _ in range(int(rng.integers(0, 3))):
		n = int(rng.integers(0, 3)) if expr.rank >= 2 else 0
		by = random_word(rng, expr.rank, int(rng.integers(0, 3)))
		expr = Infect(expr, canonical_curve(n, expr.rank).conjugate(by), KNOTS[int(rng.integers(len(KNOTS)))])
	return expr

def _expected(expr, n, tolerance):
	"""rho_n from the rules directly: knot surgeries give rho0, a curve of depth d adds rho0(K) from n = d on."""
	if isinstance(expr, TrivialLinkSurgery):
		return ZERO
	if isinstance(expr, KnotSurgery):
		return rho0(expr.knot, tolerance)
	if isinstance(expr, ConnectedSum):
		return _expected(expr.left, n, tolerance) + _expected(expr.right, n, tolerance)
	base = _expected(expr.base, n, tolerance)
	if derived_depth(expr.eta, 3).depth <= n:
		return base + rho0(expr.knot, tolerance)
	return base

def test_random_expressions_follow_the_rules(engine):
	rng = np.random.default_rng(13)
	exprs = [_random_expr(rng, 2) for _ in range(12)]
	for expr in exprs:
		vector = engine.rho_vector(expr)
		for n in range(6):
			assert vector[n] == _expected(expr, n, engine.tolerance)
		assert vector.tail == _expected(expr, 10, engine.tolerance)
	for a, b in zip(exprs, exprs[1:]):
		assert engine.rho_vector(ConnectedSum(a, b)) == engine.rho_vector(a) + engine.rho_vector(b)
