"""Multi-pattern substring search using an Aho-Corasick automaton.

Scanning every chat message against the whole censor lexicon with a
per-word ``str.find`` loop is O(words * text) and falls over once the
lexicon grows into the hundreds.  The automaton below matches all
patterns in a single pass over the text, independent of lexicon size.

Patterns are matched literally; callers are responsible for any case
normalization (both patterns and text must already be folded the same
way).
"""

from __future__ import annotations

from collections import deque
from typing import Iterator, Sequence


class AhoCorasick:
    """Automaton reporting every occurrence of every pattern.

    Occurrences overlapping each other, within one pattern or across
    patterns, are all reported; filtering is the caller's business.
    """

    def __init__(self, patterns: Sequence[str]) -> None:
        self._patterns = tuple(patterns)
        for i, pattern in enumerate(self._patterns):
            if not pattern:
                raise ValueError(f"empty pattern at index {i}")
        # Node 0 is the root.  goto holds per-node character transitions,
        # fail the longest-proper-suffix fallback, out the (pattern index,
        # pattern length) pairs that end at the node.
        self._goto: list[dict[str, int]] = [{}]
        self._fail: list[int] = [0]
        self._out: list[tuple[tuple[int, int], ...]] = [()]
        for index, pattern in enumerate(self._patterns):
            self._insert(index, pattern)
        self._build_failure_links()

    def __len__(self) -> int:
        return len(self._patterns)

    @property
    def patterns(self) -> tuple[str, ...]:
        return self._patterns

    def _insert(self, index: int, pattern: str) -> None:
        node = 0
        for ch in pattern:
            nxt = self._goto[node].get(ch)
            if nxt is None:
                nxt = len(self._goto)
                self._goto[node][ch] = nxt
                self._goto.append({})
                self._fail.append(0)
                self._out.append(())
            node = nxt
        self._out[node] += ((index, len(pattern)),)

    def _build_failure_links(self) -> None:
        queue: deque[int] = deque()
        for child in self._goto[0].values():
            # depth-1 nodes fall back to the root
            queue.append(child)
        while queue:
            node = queue.popleft()
            for ch, child in self._goto[node].items():
                queue.append(child)
                fallback = self._fail[node]
                while fallback and ch not in self._goto[fallback]:
                    fallback = self._fail[fallback]
                self._fail[child] = self._goto[fallback].get(ch, 0)
                if self._fail[child] == child:
                    self._fail[child] = 0
                # inherit matches ending at the fallback state
                self._out[child] += self._out[self._fail[child]]

    def iter_occurrences(self, text: str) -> Iterator[tuple[int, int]]:
        """Yield ``(pattern_index, start)`` for every occurrence.

        Results are ordered by occurrence end position, which for any
        single pattern means starts are ascending.
        """
        goto = self._goto
        fail = self._fail
        out = self._out
        node = 0
        for pos, ch in enumerate(text):
            while node and ch not in goto[node]:
                node = fail[node]
            node = goto[node].get(ch, 0)
            if out[node]:
                for index, length in out[node]:
                    yield index, pos - length + 1
