"""Loading knots, expressions and libraries from names, files, inline JSON and stdin."""
from __future__ import annotations

import functools
import io
import json
import logging
import sys

from pathlib import Path
from typing import Any, Optional

import jsonschema
import numpy as np # type: ignore

import dsl
import knot_factories

from exceptions import ParseError
from expressions import ManifoldExpr, expr_from_json
from families import KnotLibrary
from seifert import SeifertMatrix

LOGGER = logging.getLogger(__name__)

SCHEMA_DIR = Path(__file__).resolve().parent / "schemas"

@functools.lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
	with open(SCHEMA_DIR / f"{name}.json") as f:
		return json.load(f)

def validate(payload: Any, schema: str) -> None:
	try:
		jsonschema.validate(payload, load_schema(schema))
	except jsonschema.ValidationError as error:
		raise ParseError(f"Input does not match the {schema} schema: {error.message}") from error

def read_text(path: str) -> str:
	"""Contents of `path`, or of stdin for '-'."""
	if path == "-":
		return sys.stdin.read()
	try:
		with open(path) as f:
			return f.read()
	except OSError as error:
		raise ParseError(f"Cannot read {path}: {error.strerror}") from error

def parse_json(text: str, source: str) -> Any:
	try:
		return json.loads(text)
	except json.JSONDecodeError as error:
		raise ParseError(f"{source} is not valid JSON: {error}") from error

def matrix_from_csv(text: str, name: Optional[str] = None) -> SeifertMatrix:
	"""Rows of comma separated integers. An empty file is the unknot."""
	if not text.strip():
		return SeifertMatrix([], name=name)
	try:
		rows = np.loadtxt(io.StringIO(text), delimiter=",", dtype=np.int64, ndmin=2)
	except ValueError as error:
		raise ParseError(f"Malformed Seifert matrix CSV: {error}") from error
	return SeifertMatrix(rows.tolist(), name=name)

def matrix_from_json(data: Any) -> SeifertMatrix:
	validate(data, "knot")
	return SeifertMatrix(data["matrix"], name=data.get("name"))

def load_knot(name: Optional[str] = None, path: Optional[str] = None, inline: Optional[str] = None) -> SeifertMatrix:
	"""Exactly one of a registry name, a CSV/JSON file (or '-') and inline JSON."""
	given = [value for value in (name, path, inline) if value is not None]
	if len(given) != 1:
		raise ParseError("Give exactly one of --knot, --matrix-file and --matrix-json.")
	if name is not None:
		return knot_factories.lookup(name)
	if inline is not None:
		return matrix_from_json(parse_json(inline, "--matrix-json"))
	text = read_text(path)
	if path.endswith(".csv"):
		return matrix_from_csv(text, name=Path(path).stem)
	return matrix_from_json(parse_json(text, path))

def load_expr(text: Optional[str] = None, path: Optional[str] = None, max_n: Optional[int] = None) -> ManifoldExpr:
	"""An expression from DSL text or from a JSON file (or '-')."""
	if (text is None) == (path is None):
		raise ParseError("Give exactly one of --dsl and --expr-file.")
	if text is not None:
		return dsl.parse_expr(text, max_n)
	raw = read_text(path)
	if path != "-" and not path.endswith(".json"):
		return dsl.parse_expr(raw, max_n)
	data = parse_json(raw, path)
	validate(data, "expression")
	return expr_from_json(data)

def load_library(path: Optional[str] = None, tolerance: Optional[float] = None) -> KnotLibrary:
	if path is None:
		return KnotLibrary.default(tolerance)
	data = parse_json(read_text(path), path)
	validate(data, "library")
	return KnotLibrary.from_json(data, tolerance)
