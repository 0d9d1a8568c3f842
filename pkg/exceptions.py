class RhoKitError(Exception):
	"""Base class for every error raised by rhokit.

	The reason is given as the exception message.
	"""
	exit_code = 1
	kind = "error"

	def to_json(self) -> dict:
		return {"error": self.kind, "message": str(self.args[0]) if self.args else "", "exit_code": self.exit_code}

class ParseError(RhoKitError):
	"""Raised when a word, DSL text, matrix file or request cannot be parsed."""
	exit_code = 2
	kind = "parse_error"

class PreconditionError(RhoKitError):
	"""Raised when an operation is asked to run outside of its preconditions."""
	exit_code = 3
	kind = "precondition"

class InvalidSeifertMatrix(PreconditionError):
	kind = "invalid_seifert_matrix"

class RankMismatch(PreconditionError):
	kind = "rank_mismatch"

class NotArfZero(PreconditionError):
	kind = "not_arf_zero"

	def __init__(self, message: str, arf: int):
		super().__init__(message)
		self.arf = arf

class RefinementRequired(PreconditionError):
	"""Error bounds are too wide for the requested certificate."""
	kind = "refinement_required"

class UnreachableTarget(PreconditionError):
	kind = "unreachable_target"

	def __init__(self, message: str, best_distance: float):
		super().__init__(message)
		self.best_distance = best_distance

class DepthOverflow(RhoKitError):
	"""A curve lies deeper in the derived series than the configured max_n."""
	exit_code = 4
	kind = "depth_overflow"

	def __init__(self, message: str, word: str):
		super().__init__(message)
		self.word = word

class EngineInconsistency(RhoKitError):
	"""A vanishing audit failed. This is a bug in the rule engine, not mathematics."""
	exit_code = 5
	kind = "engine_inconsistency"
