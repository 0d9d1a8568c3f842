from __future__ import annotations

import re

from typing import Dict

from exceptions import ParseError
from seifert import SeifertMatrix, block_sum, mirror

# --Knots--
unknot = SeifertMatrix([], name="unknot")
trefoil = SeifertMatrix([[-1, 1], [0, -1]], name="trefoil")
figure8 = SeifertMatrix([[1, 1], [0, -1]], name="figure8")

def twist(k: int) -> SeifertMatrix:
	"""Twist knot with k full twists. Arf invariant is k mod 2."""
	return SeifertMatrix([[-1, 1], [0, k]], name=f"twist({k})")

# --Registry--
REGISTRY: Dict[str, SeifertMatrix] = {
	"unknot": unknot,
	"trefoil": trefoil,
	"figure8": figure8,
}

TWIST_PATTERN = re.compile(r"^twist\((-?\d+)\)$")

def lookup(name: str) -> SeifertMatrix:
	"""
	Resolve a registry name.

	Besides the fixed entries this understands `twist(k)`, `mirror(<name>)`
	and `#`-separated connected sums such as `trefoil # mirror(trefoil)`.
	"""
	name = name.strip()
	if "#" in name:
		parts = [lookup(part) for part in name.split("#")]
		return block_sum(parts, name=" # ".join(part.label for part in parts))
	if name in REGISTRY:
		return REGISTRY[name]
	match = TWIST_PATTERN.match(name)
	if match:
		return twist(int(match.group(1)))
	if name.startswith("mirror(") and name.endswith(")"):
		return mirror(lookup(name[len("mirror("):-1]))
	raise ParseError(f"Unknown knot name {name!r}.")
