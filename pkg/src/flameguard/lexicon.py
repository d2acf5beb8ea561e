"""Censor-word lexicon: loading, persistence, matching, masking.

The lexicon is the set of words the server refuses to relay verbatim.
Matching is case-insensitive; every occurrence of every entry is found
and replaced character-for-character with ``*`` so message length is
preserved.  Lexicons are immutable value objects: ``add_word`` returns
a new instance, which lets a running server swap the active lexicon
atomically while in-flight scans keep their snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Optional

from .matcher import AhoCorasick

# '#' frames the wire protocol, '*' is the mask character, ',' is the
# lexicon file's record delimiter, newlines end records.
RESERVED_CHARS = frozenset("#*,\n\r")


class FlameCategory(str, Enum):
    """Severity classes a censor word can be tagged with."""

    HOSTILE = "hostile"
    AGGRESSIVE = "aggressive"
    OFFENSIVE = "offensive"
    UNINHIBITED = "uninhibited"


DEFAULT_CATEGORY = FlameCategory.OFFENSIVE


class LexiconError(ValueError):
    """Base class for lexicon validation problems."""


class InvalidWord(LexiconError):
    """Word is empty or contains a reserved character."""


class UnknownCategory(LexiconError):
    """Category label is not one of the four known classes."""


class MatchMode(str, Enum):
    """How entries are located inside a message."""

    SUBSTRING = "substring"  # "ass" matches inside "bypass"
    WORD = "word"            # entry must be delimited by non-word chars


def fold_text(text: str) -> str:
    """Length-preserving lowercase fold used for all matching.

    Plain ``str.lower()`` is used whenever it keeps the character
    count (true for ASCII and nearly every script).  Characters whose
    lowercase form would expand (e.g. ``İ`` -> ``i̇``) are kept as-is so
    match spans always map one-to-one onto the original text.
    """
    lowered = text.lower()
    if len(lowered) == len(text):
        return lowered
    chars = []
    for ch in text:
        low = ch.lower()
        chars.append(low if len(low) == 1 else ch)
    return "".join(chars)


def _validate_word(word: str) -> None:
    if not word:
        raise InvalidWord("censor word is empty")
    bad = RESERVED_CHARS.intersection(word)
    if bad:
        raise InvalidWord(
            f"censor word {word!r} contains reserved character(s): "
            + ", ".join(repr(c) for c in sorted(bad))
        )


@dataclass(frozen=True)
class CensorEntry:
    """One lexicon record: a folded word plus its severity category."""

    word: str
    category: FlameCategory = DEFAULT_CATEGORY

    def __post_init__(self) -> None:
        _validate_word(self.word)
        if self.word != fold_text(self.word):
            raise InvalidWord(f"censor word {self.word!r} is not case-folded")
        if not isinstance(self.category, FlameCategory):
            raise UnknownCategory(f"unknown category {self.category!r}")


@dataclass(frozen=True)
class WordMatch:
    """All occurrences of a single entry inside one text."""

    word: str
    category: FlameCategory
    spans: tuple[tuple[int, int], ...]  # half-open [start, end) offsets


@dataclass(frozen=True)
class MatchSet:
    """Result of scanning one text against a lexicon.

    ``matches`` holds only entries that occurred at least once, ordered
    by first occurrence (ties broken by word).  Spans of one entry never
    overlap each other.
    """

    matches: tuple[WordMatch, ...] = ()

    @property
    def distinct_entry_count(self) -> int:
        """Number of distinct lexicon entries that matched."""
        return len(self.matches)

    def words(self) -> list[str]:
        return [m.word for m in self.matches]

    def __bool__(self) -> bool:
        return bool(self.matches)


class CensorLexicon:
    """Immutable set of censor entries, keyed by folded word."""

    def __init__(self, entries: Iterable[CensorEntry] = ()) -> None:
        table: dict[str, CensorEntry] = {}
        for entry in entries:
            # duplicate words keep the first-seen category
            table.setdefault(entry.word, entry)
        self._table = table
        self._automaton: Optional[AhoCorasick] = None

    def __len__(self) -> int:
        return len(self._table)

    def __iter__(self) -> Iterator[CensorEntry]:
        return iter(self._table.values())

    def __contains__(self, word: str) -> bool:
        return fold_text(word) in self._table

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CensorLexicon):
            return NotImplemented
        return self._table == other._table

    def __repr__(self) -> str:
        return f"CensorLexicon({len(self._table)} entries)"

    def get(self, word: str) -> Optional[CensorEntry]:
        return self._table.get(fold_text(word))

    def entries(self) -> list[CensorEntry]:
        """All entries sorted by word."""
        return sorted(self._table.values(), key=lambda e: e.word)

    def _scanner(self) -> AhoCorasick:
        # built on first use; safe because the instance never mutates
        if self._automaton is None:
            self._automaton = AhoCorasick(tuple(self._table))
        return self._automaton

    def _occurrences(self, folded_text: str) -> Iterator[tuple[str, int]]:
        """Yield (word, start) for every raw occurrence, ordered by end."""
        if not self._table:
            return
        words = tuple(self._table)
        for index, start in self._scanner().iter_occurrences(folded_text):
            yield words[index], start


def load_lexicon(source_text: str) -> CensorLexicon:
    """Parse lexicon file text.

    One record per line: ``word`` or ``word,category``.  Lines are
    trimmed and case-folded; blank lines are ignored; duplicate words
    collapse to the first occurrence.

    Raises:
        InvalidWord: a word is empty or contains a reserved character.
        UnknownCategory: a category label is not recognized.
    """
    entries = []
    for lineno, raw_line in enumerate(source_text.splitlines(), start=1):
        line = raw_line.strip()
        if not line:
            continue
        word_part, sep, category_part = line.partition(",")
        if sep:
            label = category_part.strip().lower()
            try:
                category = FlameCategory(label)
            except ValueError:
                raise UnknownCategory(
                    f"line {lineno}: unknown category {category_part.strip()!r}"
                ) from None
        else:
            category = DEFAULT_CATEGORY
        word = fold_text(word_part.strip())
        try:
            entries.append(CensorEntry(word, category))
        except InvalidWord as exc:
            raise InvalidWord(f"line {lineno}: {exc}") from None
    return CensorLexicon(entries)


def save_lexicon(lexicon: CensorLexicon) -> str:
    """Render a lexicon as file text, one ``word,category`` per line.

    Entries are sorted by word so output is deterministic;
    ``load_lexicon(save_lexicon(lex)) == lex`` always holds.
    """
    return "".join(f"{e.word},{e.category.value}\n" for e in lexicon.entries())


def add_word(
    lexicon: CensorLexicon,
    word: str,
    category: FlameCategory | str = DEFAULT_CATEGORY,
) -> CensorLexicon:
    """Return a lexicon that also contains ``word``.

    The word is trimmed and folded first.  Adding a word that is
    already present is a no-op returning the original lexicon (the
    existing category wins).
    """
    if not isinstance(category, FlameCategory):
        try:
            category = FlameCategory(str(category).strip().lower())
        except ValueError:
            raise UnknownCategory(f"unknown category {category!r}") from None
    folded = fold_text(word.strip())
    _validate_word(folded)
    if folded in lexicon._table:
        return lexicon
    return CensorLexicon([*lexicon, CensorEntry(folded, category)])


def _is_word_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def _delimited(text: str, start: int, end: int) -> bool:
    left_ok = start == 0 or not _is_word_char(text[start - 1])
    right_ok = end == len(text) or not _is_word_char(text[end])
    return left_ok and right_ok


def find_matches(
    lexicon: CensorLexicon,
    text: str,
    mode: MatchMode = MatchMode.SUBSTRING,
) -> MatchSet:
    """Scan ``text`` for every lexicon entry.

    Matching is case-insensitive.  For each entry, occurrences are
    reported left to right, greedily skipping any that overlap an
    already-reported occurrence of the same entry.  In ``WORD`` mode an
    occurrence only counts when not adjacent to a word character
    (letter, digit or underscore).
    """
    folded = fold_text(text)
    spans_by_word: dict[str, list[tuple[int, int]]] = {}
    for word, start in lexicon._occurrences(folded):
        end = start + len(word)
        if mode is MatchMode.WORD and not _delimited(folded, start, end):
            continue
        spans = spans_by_word.setdefault(word, [])
        if spans and start < spans[-1][1]:
            continue  # overlaps the previous kept occurrence of this word
        spans.append((start, end))
    matches = [
        WordMatch(word, lexicon._table[word].category, tuple(spans))
        for word, spans in spans_by_word.items()
    ]
    matches.sort(key=lambda m: (m.spans[0][0], m.word))
    return MatchSet(tuple(matches))


def mask(text: str, matches: MatchSet) -> str:
    """Replace every matched character with ``*``.

    ``matches`` must have been produced by scanning this same ``text``.
    Output length always equals input length, and because ``*`` can
    never appear in a lexicon entry, re-scanning masked output in
    substring mode finds nothing.
    """
    if not matches:
        return text
    chars = list(text)
    for match in matches.matches:
        for start, end in match.spans:
            for i in range(start, end):
                chars[i] = "*"
    return "".join(chars)
