from typing import Iterable, List, Reversible

import logging

LOGGER = logging.getLogger(__name__)

class Note:
	def __init__(self, text: str, source: str):
		self.plain_text = text
		self.source = source
		self.count = 1

	@property
	def full_text(self) -> str:
		"""The full text of this note including the count."""
		if self.count > 1:
			return f"{self.plain_text} (x{self.count})"
		return self.plain_text

class ProvenanceLog:
	"""Notes explaining where a tag, a value or an audit verdict came from."""

	def __init__(self, notes: Iterable[Note] = ()) -> None:
		self.notes: List[Note] = list(notes)

	def add_note(self, text: str, source: str = "rule", *, stack: bool = True) -> None:
		"""Add a note to this log.
		`text` is the note text. `source` names the rule or assumption.
		If `stack` is True then the note can stack with the previous note
		of the same text.
		"""
		LOGGER.debug("%s: %s", source, text)
		if stack and self.notes and text == self.notes[-1].plain_text:
			self.notes[-1].count += 1
		else:
			self.notes.append(Note(text, source))

	def extend(self, other: "ProvenanceLog") -> None:
		for note in other.notes:
			for _ in range(note.count):
				self.add_note(note.plain_text, note.source)

	def __len__(self) -> int:
		return len(self.notes)

	def lines(self) -> List[str]:
		return [f"[{note.source}] {note.full_text}" for note in self.notes]

	@classmethod
	def render_notes(cls, notes: Reversible[Note], limit: int) -> List[str]:
		"""Return the latest `limit` notes, oldest first."""
		lines: List[str] = []
		for note in reversed(notes):
			if len(lines) >= limit:
				break
			lines.append(note.full_text)
		return list(reversed(lines))
