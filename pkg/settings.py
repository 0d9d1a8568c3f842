import os

# Defaults for every computation. CLI flags override these per request.

DEFAULT_TOLERANCE = float(os.environ.get("RHOKIT_TOLERANCE", "1e-12"))

DEFAULT_MAX_DEPTH = int(os.environ.get("RHOKIT_MAX_DEPTH", "3"))
MAX_DEPTH_LIMIT = 4

# Applies to words typed by a user, not to generated canonical curves.
MAX_WORD_LENGTH = 64

COEFFICIENT_BUDGET = 6
RELATION_SEARCH_LIMIT = 4_000_000

CORPUS_SEED = 2024
CORPUS_SIZE = 50

# Breakpoint angles are rounded outward to INTERVAL_DIGITS decimals at least,
# more when the requested tolerance is finer.
INTERVAL_DIGITS = 50
GUARD_DIGITS = 10

MAX_RESAMPLES = 64

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"
