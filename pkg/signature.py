"""
Levine-Tristram signature functions and rho_0 from Seifert matrices.

Breakpoints are isolated exactly: the Alexander polynomial is split into
irreducible factors, each palindromic factor f of degree 2d is rewritten as
t^d g(t + 1/t), and the real roots of g in (-2, 2) are isolated with rational
intervals. A root y gives the angle t = arccos(y / 2) / 2pi and its mirror 1 - t.
Arc values come from exact inertia of the form at a point of the circle with
rational coordinates.
"""
from __future__ import annotations

import functools
import logging
import math

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np # type: ignore
import sympy

import settings

from exceptions import PreconditionError, RhoKitError
from seifert import SeifertMatrix, alexander_polynomial, t

LOGGER = logging.getLogger(__name__)

y = sympy.Symbol("y")

def to_fraction(value: sympy.Rational) -> Fraction:
	value = sympy.Rational(value)
	return Fraction(int(value.p), int(value.q))

def format_fraction(value: Fraction) -> str:
	return str(value)

class Rho0Value:
	"""A real number given as a rational value and a rational bound on its absolute error."""

	def __init__(self, value: Fraction, error_bound: Fraction = Fraction(0)):
		self.value = Fraction(value)
		self.error_bound = Fraction(error_bound)
		if self.error_bound < 0:
			raise ValueError("error_bound must be nonnegative")

	@classmethod
	def zero(cls) -> Rho0Value:
		return cls(Fraction(0))

	@property
	def is_exact(self) -> bool:
		return self.error_bound == 0

	def is_certainly_nonzero(self) -> bool:
		return abs(self.value) > self.error_bound

	def is_consistent_with_zero(self) -> bool:
		return abs(self.value) <= self.error_bound

	def scale(self, factor: int) -> Rho0Value:
		return Rho0Value(self.value * factor, self.error_bound * abs(factor))

	def __add__(self, other: Rho0Value) -> Rho0Value:
		return Rho0Value(self.value + other.value, self.error_bound + other.error_bound)

	def __neg__(self) -> Rho0Value:
		return Rho0Value(-self.value, self.error_bound)

	def __sub__(self, other: Rho0Value) -> Rho0Value:
		return self + (-other)

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, Rho0Value):
			return NotImplemented
		return self.value == other.value and self.error_bound == other.error_bound

	def __hash__(self) -> int:
		return hash((self.value, self.error_bound))

	def __float__(self) -> float:
		return float(self.value)

	def close_to(self, other: Rho0Value) -> bool:
		"""True if the two values agree within their summed error bounds."""
		return abs(self.value - other.value) <= self.error_bound + other.error_bound

	def to_json(self) -> dict:
		return {"value": format_fraction(self.value), "error_bound": format_fraction(self.error_bound)}

	def __repr__(self) -> str:
		if self.is_exact:
			return f"Rho0Value({self.value})"
		return f"Rho0Value({self.value} +- {float(self.error_bound):.3g})"

class Breakpoint:
	"""An isolating interval [lo, hi] in the normalized circle coordinate t."""

	def __init__(self, lo: Fraction, hi: Fraction, multiplicity: int = 1, exact: Optional[Fraction] = None):
		self.lo = lo
		self.hi = hi
		self.multiplicity = multiplicity
		self.exact = exact

	@property
	def width(self) -> Fraction:
		return self.hi - self.lo

	@property
	def midpoint(self) -> Fraction:
		return (self.lo + self.hi) / 2

	def mirrored(self) -> Breakpoint:
		exact = 1 - self.exact if self.exact is not None else None
		return Breakpoint(1 - self.hi, 1 - self.lo, self.multiplicity, exact)

	def contains(self, angle: Fraction) -> bool:
		return self.lo <= angle <= self.hi

	def to_json(self) -> dict:
		return {"lo": format_fraction(self.lo), "hi": format_fraction(self.hi)}

	def __repr__(self) -> str:
		if self.exact is not None:
			return f"Breakpoint({self.exact})"
		return f"Breakpoint([{float(self.lo):.12f}, {float(self.hi):.12f}])"

def compact_form(f: sympy.Poly) -> sympy.Poly:
	"""
	Given a palindromic polynomial f(t) of degree 2d, return the polynomial g
	with f(t) = t^d g(t + 1/t).
	"""
	coeffs = f.all_coeffs()
	assert coeffs == coeffs[::-1] and f.degree() % 2 == 0
	rest = f
	g = sympy.Poly(0, y)
	while not rest.is_zero:
		c = rest.LC()
		d = rest.degree() // 2
		g += sympy.Poly(c * y**d, y)
		rest = rest - sympy.Poly(c * (t**2 + 1)**d, t)
		if not rest.is_zero:
			e = min(monom[0] for monom in rest.monoms())
			assert e > 0
			rest = sympy.Poly(sympy.expand(rest.as_expr() / t**e), t)
	return g

def _cyclotomic_order(f: sympy.Poly) -> Optional[int]:
	degree = f.degree()
	for order in range(3, 2 * degree * degree + 3):
		if sympy.totient(order) == degree and sympy.Poly(sympy.cyclotomic_poly(order, t), t) == f:
			return order
	return None

def _palindromic_factors(poly: sympy.Poly) -> List[Tuple[sympy.Poly, int]]:
	"""Irreducible factors that can have roots on the unit circle."""
	_, factors = poly.factor_list()
	kept = []
	for f, multiplicity in factors:
		f = sympy.Poly(f, t)
		if f.LC() < 0:
			f = -f
		coeffs = f.all_coeffs()
		if f.degree() >= 2 and f.degree() % 2 == 0 and coeffs == coeffs[::-1]:
			kept.append((f, multiplicity))
	return kept

def digits_for(tolerance: float) -> int:
	"""Decimal digits of breakpoint angles needed to reach `tolerance`."""
	if not (math.isfinite(tolerance) and tolerance > 0):
		raise PreconditionError(f"Tolerance must be a positive finite number, got {tolerance}.")
	return max(settings.INTERVAL_DIGITS, math.ceil(-math.log10(tolerance)) + settings.GUARD_DIGITS)

def _angle(y_value: Fraction, outward: int, digits: int = settings.INTERVAL_DIGITS) -> Fraction:
	"""arccos(y/2)/2pi rounded outward (-1 down, +1 up) to `digits` decimals."""
	scale = 10 ** digits
	with mpmath.workdps(digits + settings.GUARD_DIGITS):
		half = mpmath.mpf(y_value.numerator) / (2 * y_value.denominator)
		angle = mpmath.acos(half) / (2 * mpmath.pi)
		angle += outward * mpmath.power(10, -(digits + 2))
		if outward < 0:
			return Fraction(int(mpmath.floor(angle * scale)), scale)
		return Fraction(int(mpmath.ceil(angle * scale)), scale)

class CircleRoot:
	"""A root exp(2 pi i t) with 0 < t < 1/2 of one irreducible factor, tracked in y = 2cos(2 pi t)."""

	def __init__(self, g: sympy.Poly, multiplicity: int, y_lo: Fraction, y_hi: Fraction, exact: Optional[Fraction] = None):
		self.g = g
		self.multiplicity = multiplicity
		self.y_lo = y_lo
		self.y_hi = y_hi
		self.exact = exact
		self.digits = settings.INTERVAL_DIGITS

	def refine(self) -> None:
		"""Halve the isolating interval in y and round the angles one digit finer."""
		self.digits += 1
		if self.y_lo == self.y_hi:
			return
		eps = sympy.Rational(self.y_hi - self.y_lo) / 2
		lo, hi = self.g.refine_root(sympy.Rational(self.y_lo), sympy.Rational(self.y_hi), eps=eps)
		self.y_lo, self.y_hi = to_fraction(lo), to_fraction(hi)

	def breakpoint(self) -> Breakpoint:
		if self.exact is not None:
			return Breakpoint(self.exact, self.exact, self.multiplicity, self.exact)
		# t decreases as y increases
		return Breakpoint(
			_angle(self.y_hi, -1, self.digits), _angle(self.y_lo, +1, self.digits), self.multiplicity
		)

	def overlaps(self, other: CircleRoot) -> bool:
		return self.y_lo <= other.y_hi and other.y_lo <= self.y_hi

def _upper_roots(V: SeifertMatrix) -> List[CircleRoot]:
	"""Roots with 0 < t < 1/2, sorted by t, with pairwise disjoint y-intervals."""
	roots: List[CircleRoot] = []
	for f, multiplicity in _palindromic_factors(alexander_polynomial(V)):
		g = compact_form(f)
		isolated = sorted(
			(to_fraction(lo), to_fraction(hi))
			for (lo, hi), _ in g.intervals(inf=-2, sup=2)
		)
		exact_angles: List[Optional[Fraction]] = [None] * len(isolated)
		order = _cyclotomic_order(f)
		if order is not None:
			angles = [Fraction(k, order) for k in range(1, (order + 1) // 2) if sympy.gcd(k, order) == 1]
			# y descending <-> t ascending
			exact_angles = list(reversed(angles))
			assert len(exact_angles) == len(isolated)
		for (lo, hi), exact in zip(isolated, exact_angles):
			root = CircleRoot(g, multiplicity, lo, hi, exact)
			# f(+-1) != 0, so the root is strictly inside (-2, 2)
			while root.y_lo <= -2 or root.y_hi >= 2:
				root.refine()
			roots.append(root)

	roots.sort(key=lambda root: root.y_lo, reverse=True)
	while True:
		clashes = [
			(a, b) for a, b in zip(roots, roots[1:]) if a.overlaps(b)
		]
		if not clashes:
			break
		for a, b in clashes:
			a.refine()
			b.refine()
		roots.sort(key=lambda root: root.y_lo, reverse=True)
	return roots

def circle_roots(V: SeifertMatrix) -> List[Breakpoint]:
	"""Isolating intervals for every unit-circle root of the Alexander polynomial, in (0, 1)."""
	upper = [root.breakpoint() for root in _upper_roots(V)]
	return upper + [bp.mirrored() for bp in reversed(upper)]

def _y_of(s: Fraction) -> Fraction:
	return 2 * (1 - s * s) / (1 + s * s)

def _sample_parameter(ya: Fraction, yb: Fraction, shrink: int = 0) -> Fraction:
	"""
	Rational s > 0 with ya < 2(1 - s^2)/(1 + s^2) < yb.

	The point w = ((1 - s^2) + 2is)/(1 + s^2) is then on the upper unit circle
	with rational coordinates. `shrink` > 0 narrows the target window towards
	the middle of the gap.
	"""
	for _ in range(shrink):
		third = (yb - ya) / 3
		ya, yb = ya + third, yb - third
	lo, hi = Fraction(0), Fraction(1)
	while _y_of(hi) >= yb:
		lo, hi = hi, hi * 2
	if _y_of(hi) > ya:
		return hi
	while True:
		mid = (lo + hi) / 2
		value = _y_of(mid)
		if value >= yb:
			lo = mid
		elif value <= ya:
			hi = mid
		else:
			return mid

def _descartes_changes(coeffs: Sequence[sympy.Integer]) -> int:
	signs = [1 if c > 0 else -1 for c in coeffs if c != 0]
	return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

def inertia(M: sympy.Matrix) -> Tuple[int, int, int]:
	"""(positive, negative, zero) eigenvalue counts of a real symmetric matrix, exactly."""
	if M.rows == 0:
		return 0, 0, 0
	coeffs = list(M.charpoly().all_coeffs())
	zeros = 0
	while coeffs and coeffs[-1] == 0:
		coeffs.pop()
		zeros += 1
	degree = len(coeffs) - 1
	positive = _descartes_changes(coeffs)
	negative = _descartes_changes([c * (-1) ** (degree - i) for i, c in enumerate(coeffs)])
	return positive, negative, zeros

def _signature_at_parameter(V: SeifertMatrix, s: Fraction) -> Optional[int]:
	"""
	Signature of the form at w(s), or None if the form is degenerate there.

	Up to the positive factor 2s/(1+s^2) the form is s(V + V^T) - i(V - V^T);
	its real 2n x 2n realification has every eigenvalue doubled.
	"""
	if not V.size:
		return 0
	blocks = V.blocks()
	if len(blocks) > 1:
		total = 0
		for block in blocks:
			value = _signature_at_parameter(block, s)
			if value is None:
				return None
			total += value
		return total
	M = V.matrix()
	A = s.numerator * (M + M.T)
	B = s.denominator * (M.T - M)
	real = sympy.BlockMatrix([[A, -B], [B, A]]).as_explicit()
	positive, negative, zeros = inertia(real)
	if zeros:
		return None
	return (positive - negative) // 2

def _arc_signature(V: SeifertMatrix, ya: Fraction, yb: Fraction) -> int:
	for shrink in range(settings.MAX_RESAMPLES):
		s = _sample_parameter(ya, yb, shrink)
		value = _signature_at_parameter(V, s)
		if value is not None:
			return value
		LOGGER.warning("degenerate sample s=%s for %s, resampling", s, V.label)
	raise RhoKitError(f"Could not find a nondegenerate sample in ({ya}, {yb}) for {V.label}.")

class SignatureFunction:
	"""
	Piecewise constant even-integer function on the circle t in [0, 1).

	values[j] is the value on the open arc (b_j, b_{j+1}); the last value is
	on the arc that wraps from the last breakpoint through t = 0 to the first.
	Without breakpoints there is a single value for the whole circle.
	"""

	def __init__(self, breakpoints: List[Breakpoint], values: List[int], size: int = 0):
		if len(values) != max(1, len(breakpoints)):
			raise ValueError("need one value per arc")
		self.breakpoints = breakpoints
		self.values = values
		self.size = size

	def arcs(self) -> List[Tuple[Fraction, Fraction, int]]:
		"""(start midpoint, end midpoint, value), the wrapping arc last with end > 1."""
		if not self.breakpoints:
			return [(Fraction(0), Fraction(1), self.values[0])]
		mids = [bp.midpoint for bp in self.breakpoints]
		arcs = [(mids[j], mids[j + 1], self.values[j]) for j in range(len(mids) - 1)]
		arcs.append((mids[-1], mids[0] + 1, self.values[-1]))
		return arcs

	def jumps(self) -> List[int]:
		"""Value after minus value before, per breakpoint."""
		if not self.breakpoints:
			return []
		return [self.values[j] - self.values[j - 1] for j in range(len(self.breakpoints))]

	def value_at(self, angle: float) -> Optional[int]:
		"""Value at t, or None inside a breakpoint's isolating interval."""
		angle = Fraction(angle) % 1
		if not self.breakpoints:
			return self.values[0]
		for j, bp in enumerate(self.breakpoints):
			if bp.contains(angle):
				return None
			if angle < bp.lo:
				return self.values[j - 1]
		return self.values[-1]

	def integral(self) -> Rho0Value:
		value = sum((Fraction(v) * (end - start) for start, end, v in self.arcs()), Fraction(0))
		error = sum(
			(abs(jump) * bp.width for jump, bp in zip(self.jumps(), self.breakpoints)),
			Fraction(0),
		)
		return Rho0Value(value, error)

	def to_json(self) -> dict:
		return {
			"breakpoints": [bp.to_json() for bp in self.breakpoints],
			"values": list(self.values),
		}

	def sample(self, samples: int) -> List[Tuple[float, Optional[int]]]:
		grid = np.linspace(0.0, 1.0, samples, endpoint=False)
		return [(float(x), self.value_at(float(x))) for x in grid]

def signature_function(V: SeifertMatrix, tolerance: Optional[float] = None) -> SignatureFunction:
	"""
	Exact signature function of V.

	Every circle root is a breakpoint, including those where the value does not
	change. Intervals of breakpoints with a jump are refined until the integral's
	error bound is at most `tolerance`.
	"""
	if tolerance is None:
		tolerance = settings.DEFAULT_TOLERANCE
	digits = digits_for(tolerance)
	roots = _upper_roots(V)
	for root in roots:
		root.digits = digits
	upper_values = []
	for j in range(len(roots) + 1):
		yb = Fraction(2) if j == 0 else roots[j - 1].y_lo
		ya = Fraction(-2) if j == len(roots) else roots[j].y_hi
		upper_values.append(_arc_signature(V, ya, yb))

	arc_values = upper_values
	jumps = [abs(b - a) for a, b in zip(arc_values, arc_values[1:])]
	budget = Fraction(tolerance)
	while True:
		breakpoints = [root.breakpoint() for root in roots]
		error = 2 * sum((j * bp.width for j, bp in zip(jumps, breakpoints)), Fraction(0))
		if error <= budget:
			break
		# refine() also adds an angle digit, so exact rational roots narrow too
		for jump, root, bp in zip(jumps, roots, breakpoints):
			if jump * bp.width * 2 * len(roots) > budget:
				root.refine()

	k = len(breakpoints)
	full = breakpoints + [bp.mirrored() for bp in reversed(breakpoints)]
	values = arc_values[1:] + list(reversed(arc_values[1:k])) + [arc_values[0]]
	LOGGER.debug("signature function of %s: %d breakpoints", V.label, len(full))
	return SignatureFunction(full, values, V.size)

@functools.lru_cache(maxsize=4096)
def _rho0_cached(V: SeifertMatrix, tolerance: float) -> Rho0Value:
	return signature_function(V, tolerance).integral()

def rho0(V: SeifertMatrix, tolerance: Optional[float] = None) -> Rho0Value:
	"""Integral of the signature function over the circle of length 1."""
	if tolerance is None:
		tolerance = settings.DEFAULT_TOLERANCE
	return _rho0_cached(V, float(tolerance))

def sampled_rho0(V: SeifertMatrix, samples: int = 100_000, chunk: int = 20_000) -> float:
	"""Dense oracle: mean signature over `samples` midpoints, from floating point eigenvalues."""
	if not V.size:
		return 0.0
	A = V.array().astype(np.complex128)
	total = 0
	for start in range(0, samples, chunk):
		angles = (np.arange(start, min(start + chunk, samples)) + 0.5) / samples
		omega = np.exp(2j * np.pi * angles)[:, None, None]
		forms = (1 - omega) * A + (1 - np.conj(omega)) * A.T
		eigenvalues = np.linalg.eigvalsh(forms)
		total += int(np.sum(eigenvalues > 0)) - int(np.sum(eigenvalues < 0))
	return total / samples

def signature_at(V: SeifertMatrix, angle: float) -> int:
	"""Floating point signature at t; for plots only."""
	if not V.size:
		return 0
	A = V.array().astype(np.complex128)
	omega = np.exp(2j * np.pi * angle)
	eigenvalues = np.linalg.eigvalsh((1 - omega) * A + (1 - np.conj(omega)) * A.T)
	return int(np.sum(eigenvalues > 0)) - int(np.sum(eigenvalues < 0))
