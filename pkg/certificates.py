"""
Bounded integer-relation search over rho values.

A certificate either exhibits c != 0 with |c_i| <= B and |sum c_i v_i| <= tau,
or states that no such c exists. Real numbers are never claimed independent.
"""
from __future__ import annotations

import itertools
import logging

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np # type: ignore

import settings

from exceptions import PreconditionError, RefinementRequired
from signature import Rho0Value
from verdicts import CertificateVerdict

LOGGER = logging.getLogger(__name__)

FLOAT_SLACK = 1e-9

class IndependenceCertificate:
	def __init__(
		self,
		values: Sequence[Rho0Value],
		bound: int,
		tau: Fraction,
		verdict: CertificateVerdict,
		coefficients: Optional[Tuple[int, ...]] = None,
		method: str = "",
		names: Optional[Sequence[str]] = None,
	):
		self.values = list(values)
		self.bound = bound
		self.tau = tau
		self.verdict = verdict
		self.coefficients = coefficients
		self.method = method
		self.names = list(names) if names is not None else None

	@property
	def relation_found(self) -> bool:
		return self.verdict is CertificateVerdict.RELATION_FOUND

	def residual(self) -> Rho0Value:
		"""sum c_i v_i for the reported relation."""
		total = Rho0Value.zero()
		for coeff, value in zip(self.coefficients or (), self.values):
			total = total + value.scale(coeff)
		return total

	def to_json(self) -> dict:
		payload = {
			"verdict": self.verdict.value,
			"bound": self.bound,
			"tau": str(self.tau),
			"values": [value.to_json() for value in self.values],
			"method": self.method,
		}
		if self.names is not None:
			payload["names"] = self.names
		if self.relation_found:
			payload["coefficients"] = list(self.coefficients)
			payload["residual"] = self.residual().to_json()
		return payload

def _half_vectors(size: int, bound: int) -> np.ndarray:
	count = (2 * bound + 1) ** size
	if count > settings.RELATION_SEARCH_LIMIT:
		raise PreconditionError(
			f"Searching {count} coefficient vectors per half exceeds the limit {settings.RELATION_SEARCH_LIMIT}."
		)
	if size == 0:
		return np.zeros((1, 0), dtype=np.int64)
	return np.array(list(itertools.product(range(-bound, bound + 1), repeat=size)), dtype=np.int64)

def _normalized(vector: Tuple[int, ...]) -> Tuple[int, ...]:
	for c in vector:
		if c:
			return vector if c > 0 else tuple(-x for x in vector)
	return vector

def independence_certificate(
	values: Sequence[Rho0Value],
	bound: int,
	tau: float,
	names: Optional[Sequence[str]] = None,
) -> IndependenceCertificate:
	"""
	Exhaustive meet-in-the-middle search over nonzero c in [-B, B]^k.

	Candidates are screened in floating point with a window wide enough to
	hold every vector that could satisfy the relation, then decided exactly.
	"""
	tau = Fraction(tau)
	values = list(values)
	if not values:
		raise PreconditionError("Need at least one value.")
	if bound < 1 or tau <= 0:
		raise PreconditionError(f"Need B >= 1 and tau > 0, got B = {bound}, tau = {tau}.")
	limit = tau / (len(values) * bound)
	for index, value in enumerate(values):
		if value.error_bound >= limit:
			raise RefinementRequired(
				f"Value {index} has error bound {float(value.error_bound):.3g}, need < {float(limit):.3g}."
			)

	split = len(values) // 2
	floats = np.array([float(value.value) for value in values])
	left = _half_vectors(split, bound)
	right = _half_vectors(len(values) - split, bound)
	left_sums = left @ floats[:split]
	right_sums = right @ floats[split:]
	order = np.argsort(right_sums, kind="stable")
	sorted_sums = right_sums[order]

	total_error = sum((value.error_bound for value in values), Fraction(0))
	width = float(tau + bound * total_error) + FLOAT_SLACK * (1 + bound * float(np.abs(floats).sum()))
	lo = np.searchsorted(sorted_sums, -left_sums - width, side="left")
	hi = np.searchsorted(sorted_sums, -left_sums + width, side="right")
	counts = hi - lo
	left_index = np.repeat(np.arange(len(left)), counts)
	offsets = np.arange(int(counts.sum())) - np.repeat(np.cumsum(counts) - counts, counts)
	right_index = order[np.repeat(lo, counts) + offsets]

	relations: List[Tuple[int, ...]] = []
	undecided = 0
	for i, j in zip(left_index, right_index):
		vector = tuple(int(c) for c in left[i]) + tuple(int(c) for c in right[j])
		if not any(vector):
			continue
		residual = sum((Fraction(c) * value.value for c, value in zip(vector, values)), Fraction(0))
		slack = sum((abs(c) * value.error_bound for c, value in zip(vector, values)), Fraction(0))
		if abs(residual) + slack <= tau:
			relations.append(_normalized(vector))
		elif abs(residual) - slack <= tau:
			undecided += 1
	LOGGER.debug("%d candidates, %d relations, %d undecided", int(counts.sum()), len(relations), undecided)

	searched = len(left) * len(right) - 1
	method = f"exhaustive meet-in-the-middle over {searched} nonzero vectors with |c_i| <= {bound}"
	if relations:
		best = min(relations, key=lambda c: (sum(abs(x) for x in c), c))
		return IndependenceCertificate(values, bound, tau, CertificateVerdict.RELATION_FOUND, best, method, names)
	if undecided:
		raise RefinementRequired(f"{undecided} candidate relations cannot be decided at the current error bounds.")
	return IndependenceCertificate(values, bound, tau, CertificateVerdict.NO_RELATION_UP_TO, None, method, names)
