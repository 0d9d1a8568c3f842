from __future__ import annotations

import csv
import io
import json

from typing import Any, List, Optional, Sequence

from provenance import ProvenanceLog
from verdicts import OutputFormat

def render_json(payload: Any) -> str:
	return json.dumps(payload, indent=2, sort_keys=True) + "\n"

def render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
	out = io.StringIO()
	writer = csv.writer(out, lineterminator="\n")
	writer.writerow(header)
	writer.writerows(rows)
	return out.getvalue()

def _text_lines(payload: Any, indent: int = 0) -> List[str]:
	pad = "  " * indent
	if isinstance(payload, dict):
		if set(payload) == {"value", "error_bound"}:
			return [f"{pad}{payload['value']} (+- {payload['error_bound']})"]
		lines = []
		for key in sorted(payload):
			value = payload[key]
			if isinstance(value, (dict, list)) and value:
				lines.append(f"{pad}{key}:")
				lines.extend(_text_lines(value, indent + 1))
			else:
				lines.append(f"{pad}{key}: {value}")
		return lines
	if isinstance(payload, list):
		lines = []
		for item in payload:
			lines.extend(_text_lines(item, indent))
		return lines
	return [f"{pad}{payload}"]

def render_text(payload: Any, notes: Optional[ProvenanceLog] = None, limit: int = 20) -> str:
	"""
	Indented key: value lines. `notes` adds the latest provenance notes at the end.
	"""
	lines = _text_lines(payload)
	if notes is not None and len(notes):
		lines.append("provenance:")
		lines.extend(f"  {line}" for line in ProvenanceLog.render_notes(notes.notes, limit))
	return "\n".join(lines) + "\n"

def render(
	payload: Any,
	output: OutputFormat,
	csv_header: Optional[Sequence[str]] = None,
	csv_rows: Optional[Sequence[Sequence[Any]]] = None,
	notes: Optional[ProvenanceLog] = None,
) -> str:
	if output is OutputFormat.CSV:
		if csv_header is None:
			raise ValueError("this command has no CSV output")
		return render_csv(csv_header, csv_rows or [])
	if output is OutputFormat.TEXT:
		return render_text(payload, notes)
	return render_json(payload)
