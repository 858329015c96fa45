"""Reading and writing token-level normalization corpora.

The interchange format is "vertical": one token per line as ``raw<TAB>gold``
(gold column absent in to-be-normalized input), utterances separated by a
single blank line. Raw text for resource building is one sentence per line,
space-separated tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Iterator


class CorpusFormatError(ValueError):
    """A corpus file violates the vertical format."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class TokenEntry:
    """A surface token with an optional gold normalization.

    ``gold`` may contain single spaces (one raw token expanded to several
    gold tokens). ``gold == raw`` means "unchanged".
    """

    raw: str
    gold: str | None = None

    def __post_init__(self):
        if not self.raw or any(c.isspace() for c in self.raw):
            raise ValueError(f"raw token must be non-empty and whitespace-free: {self.raw!r}")
        if self.gold is not None and (not self.gold or self.gold != " ".join(self.gold.split())):
            raise ValueError(f"gold must be non-empty with single internal spaces: {self.gold!r}")

    @property
    def unchanged(self) -> bool:
        return self.gold is not None and self.gold.lower() == self.raw.lower()


@dataclass(frozen=True)
class Utterance:
    tokens: tuple[TokenEntry, ...]
    id: str | None = None

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("utterance must contain at least one token")

    def raw_tokens(self) -> list[str]:
        return [t.raw for t in self.tokens]


@dataclass(frozen=True)
class PreprocessRules:
    """Placeholder substitution applied to raw text before resource building."""

    username_placeholder: str = "<USERNAME>"
    url_placeholder: str = "<URL>"
    lowercase: bool = True

    def __post_init__(self):
        if not self.username_placeholder or not self.url_placeholder:
            raise ValueError("placeholders must be non-empty")


_URL_PREFIXES = ("http://", "https://", "www.")


def preprocess_token(raw: str, rules: PreprocessRules) -> str:
    """Map usernames/URLs to placeholders, otherwise optionally lowercase.

    Idempotent: placeholders themselves pass through untouched.
    """
    if not raw:
        raise ValueError("token must be non-empty")
    if raw in (rules.username_placeholder, rules.url_placeholder):
        return raw
    if raw.startswith("@") and len(raw) > 1:
        return rules.username_placeholder
    low = raw.lower()
    if low.startswith(_URL_PREFIXES):
        return rules.url_placeholder
    return low if rules.lowercase else raw


def ingest_raw_text(lines: Iterable[str], rules: PreprocessRules) -> Iterator[list[str]]:
    """Yield one preprocessed token list per non-blank input line. Streaming."""
    for line in lines:
        tokens = line.split()
        if tokens:
            yield [preprocess_token(t, rules) for t in tokens]


def parse_corpus(lines: Iterable[str]) -> list[Utterance]:
    """Parse a vertical-format stream into utterances.

    Lines have one (raw only) or two (raw TAB gold) columns; anything else is
    a :class:`CorpusFormatError` carrying the line number. An empty stream
    yields an empty list.
    """
    utterances: list[Utterance] = []
    block: list[TokenEntry] = []
    lineno = 0
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\n").rstrip("\r")
        if not line.strip():
            if block:
                utterances.append(Utterance(tuple(block), id=str(len(utterances))))
                block = []
            continue
        fields = line.split("\t")
        if len(fields) > 2:
            raise CorpusFormatError(f"expected 1 or 2 tab-separated columns, got {len(fields)}", lineno)
        try:
            if len(fields) == 1:
                block.append(TokenEntry(fields[0]))
            else:
                block.append(TokenEntry(fields[0], fields[1]))
        except ValueError as exc:
            raise CorpusFormatError(str(exc), lineno) from exc
    if block:
        utterances.append(Utterance(tuple(block), id=str(len(utterances))))
    return utterances


def write_corpus(utterances: Iterable[Utterance], out: IO[str]) -> None:
    """Write utterances in vertical format; inverse of :func:`parse_corpus`."""
    first = True
    for utt in utterances:
        if not first:
            out.write("\n")
        first = False
        for tok in utt.tokens:
            if tok.gold is None:
                out.write(f"{tok.raw}\n")
            else:
                out.write(f"{tok.raw}\t{tok.gold}\n")


def load_corpus(path: str) -> list[Utterance]:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh)


def save_corpus(utterances: Iterable[Utterance], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        write_corpus(utterances, fh)
