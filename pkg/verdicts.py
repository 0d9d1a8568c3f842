from enum import Enum

class DepthKind(Enum):
	EXACT = "exact"
	EXCEEDS = "exceeds"
	IDENTITY = "identity"

class ObstructionKind(Enum):
	OBSTRUCTED = "obstructed"
	INCONCLUSIVE = "inconclusive"

class CertificateVerdict(Enum):
	NO_RELATION_UP_TO = "NoRelationUpTo"
	RELATION_FOUND = "RelationFound"

class OutputFormat(Enum):
	JSON = "json"
	CSV = "csv"
	TEXT = "text"
