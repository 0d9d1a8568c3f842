"""
Text syntax for expression DAGs.

	trivial(2) |> infect([x1,x2], knot:"trefoil") |> sum(knot("figure8"))
	boundary(2, [x1,x2]:"trefoil", [x1,x2]:"figure8")
	stack(boundary(2, [x1,x2]:"trefoil"), boundary(2, [x1,x2]:"mirror(trefoil)"))
	bing("trefoil", "[[1,2],[3,4]]")

Knots are registry names (see knot_factories.lookup) or inline matrices
written matrix:[[-1,1],[0,-1]].
"""
from __future__ import annotations

import logging

from typing import Optional

import pyparsing as pp

import knot_factories

from exceptions import ParseError
from expressions import (
	BoundaryLinkExpr,
	BoundaryStack,
	ConnectedSum,
	Infect,
	KnotSurgery,
	ManifoldExpr,
	TrivialLinkSurgery,
)
from families import bing_double
from freegroup import WORD, FreeWord, parse_word
from seifert import SeifertMatrix

LOGGER = logging.getLogger(__name__)

class _Node:
	"""Parsed but not yet built; building may raise domain errors."""

	def __init__(self, kind: str, *args):
		self.kind = kind
		self.args = args

class _Builder:
	def __init__(self, max_n: Optional[int]):
		self.max_n = max_n

	def knot(self, node: _Node) -> SeifertMatrix:
		if node.kind == "name":
			return knot_factories.lookup(node.args[0])
		return SeifertMatrix(node.args[0])

	def curve(self, text: str, rank: int) -> FreeWord:
		return parse_word(text, rank)

	def build(self, node: _Node) -> ManifoldExpr:
		if node.kind == "trivial":
			return TrivialLinkSurgery(node.args[0])
		if node.kind == "knot":
			return KnotSurgery(self.knot(node.args[0]))
		if node.kind == "bing":
			return bing_double(self.knot(node.args[0]), node.args[1], self.max_n).expr
		if node.kind == "boundary":
			components, pairs = node.args
			return BoundaryLinkExpr(
				components,
				[(self.curve(curve, components), self.knot(knot)) for curve, knot in pairs],
			)
		if node.kind == "stack":
			links = [self.build(item) for item in node.args[0]]
			if not all(isinstance(link, BoundaryLinkExpr) for link in links):
				raise ParseError("stack(...) only accepts boundary(...) string links.")
			return BoundaryStack(links)
		if node.kind == "pipeline":
			source, steps = node.args
			expr = self.build(source)
			for step in steps:
				if step.kind == "infect":
					curve, knot = step.args
					expr = Infect(expr, self.curve(curve, expr.rank), self.knot(knot))
				else:
					expr = ConnectedSum(expr, self.build(step.args[0]))
			return expr
		raise ParseError(f"Unknown construct {node.kind!r}.")

def _build_grammar() -> pp.ParserElement:
	LPAR, RPAR, COMMA, COLON = map(pp.Suppress, "(),:")
	integer = pp.Word(pp.nums).set_parse_action(lambda toks: int(toks[0]))
	signed = pp.Regex(r"-?\d+").set_parse_action(lambda toks: int(toks[0]))
	row = pp.Group(pp.Suppress("[") + pp.DelimitedList(signed) + pp.Suppress("]"))
	matrix = (pp.Suppress("[") + pp.Optional(pp.DelimitedList(row)) + pp.Suppress("]")).set_parse_action(
		lambda toks: _Node("matrix", [list(r) for r in toks])
	)
	name = pp.QuotedString('"').set_parse_action(lambda toks: _Node("name", toks[0]))
	knot_ref = (
		pp.Suppress(pp.Keyword("knot") + COLON) + name
		| pp.Suppress(pp.Keyword("matrix") + COLON) + matrix
		| name
	)
	curve = pp.original_text_for(WORD)

	pipeline = pp.Forward()
	trivial = (pp.Suppress(pp.Keyword("trivial")) + LPAR + integer + RPAR).set_parse_action(
		lambda toks: _Node("trivial", toks[0])
	)
	knot = (pp.Suppress(pp.Keyword("knot")) + LPAR + knot_ref + RPAR).set_parse_action(
		lambda toks: _Node("knot", toks[0])
	)
	bing = (pp.Suppress(pp.Keyword("bing")) + LPAR + knot_ref + COMMA + pp.QuotedString('"') + RPAR).set_parse_action(
		lambda toks: _Node("bing", toks[0], toks[1])
	)
	pair = pp.Group(curve + COLON + knot_ref)
	boundary = (
		pp.Suppress(pp.Keyword("boundary")) + LPAR + integer + pp.ZeroOrMore(COMMA + pair) + RPAR
	).set_parse_action(lambda toks: _Node("boundary", toks[0], [tuple(p) for p in toks[1:]]))
	stack = (pp.Suppress(pp.Keyword("stack")) + LPAR + pp.DelimitedList(pipeline) + RPAR).set_parse_action(
		lambda toks: _Node("stack", list(toks))
	)
	source = trivial | knot | bing | boundary | stack | (LPAR + pipeline + RPAR)

	infect = (
		pp.Suppress(pp.Keyword("infect")) + LPAR + curve + COMMA + knot_ref + RPAR
	).set_parse_action(lambda toks: _Node("infect", toks[0], toks[1]))
	summand = (pp.Suppress(pp.Keyword("sum")) + LPAR + pipeline + RPAR).set_parse_action(
		lambda toks: _Node("sum", toks[0])
	)
	step = pp.Suppress("|>") + (infect | summand)
	pipeline <<= (source + pp.ZeroOrMore(step)).set_parse_action(
		lambda toks: _Node("pipeline", toks[0], list(toks[1:]))
	)
	return pipeline

GRAMMAR = _build_grammar()

def parse_expr(text: str, max_n: Optional[int] = None) -> ManifoldExpr:
	try:
		node = GRAMMAR.parse_string(text, parse_all=True)[0]
	except pp.ParseException as error:
		raise ParseError(f"Cannot parse expression: {error}") from error
	expr = _Builder(max_n).build(node)
	LOGGER.debug("parsed %s", expr)
	return expr
