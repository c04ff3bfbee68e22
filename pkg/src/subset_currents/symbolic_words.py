"""Cyclic words over a finite alphabet and Euler-circuit realization of block counts."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping


@dataclass(frozen=True)
class CyclicWord:
    """A nonempty word up to rotation, stored as its lexicographically least rotation."""

    letters: str

    def __post_init__(self):
        if not self.letters:
            raise ValueError("cyclic words are nonempty")
        object.__setattr__(self, "letters", least_rotation(self.letters))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return self.letters

    def is_primitive(self) -> bool:
        return minimal_period(self.letters) == len(self.letters)


def least_rotation(w: str) -> str:
    return min(w[i:] + w[:i] for i in range(len(w)))


def minimal_period(w: str) -> int:
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return p
    return n


def occurrences_cyclic(v: str, w: CyclicWord | str) -> int:
    """Starting positions on the cycle of ``w`` from which ``v`` can be read (wrapping allowed)."""
    if not v:
        raise ValueError("empty pattern")
    letters = w.letters if isinstance(w, CyclicWord) else w
    n = len(letters)
    reps = len(v) // n + 2
    text = letters * reps
    return sum(1 for i in range(n) if text[i:i + len(v)] == v)


@dataclass(frozen=True)
class WordWeightSystem:
    alphabet: str
    m: int
    t: Mapping[str, int]

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("block length must be >= 2")
        if len(set(self.alphabet)) != len(self.alphabet) or len(self.alphabet) < 2:
            raise ValueError("alphabet needs at least two distinct letters")
        for block, value in self.t.items():
            if len(block) != self.m or any(c not in self.alphabet for c in block):
                raise ValueError(f"bad block {block!r}")
            if value < 0:
                raise ValueError(f"negative weight on {block!r}")

    def __getitem__(self, block: str) -> int:
        return self.t.get(block, 0)

    def blocks(self):
        return ("".join(p) for p in itertools.product(self.alphabet, repeat=self.m))


def word_weights(words, alphabet: str, m: int) -> WordWeightSystem:
    """Total occurrence counts of every m-block in a collection of cyclic words."""
    counts = {}
    for block in map("".join, itertools.product(alphabet, repeat=m)):
        c = sum(occurrences_cyclic(block, w) for w in words)
        if c:
            counts[block] = c
    return WordWeightSystem(alphabet, m, counts)


def check_word_switch(t: WordWeightSystem) -> list[tuple[str, int, int]]:
    """``(u, right-extension sum, left-extension sum)`` for every unbalanced (m-1)-block."""
    bad = []
    for u in map("".join, itertools.product(t.alphabet, repeat=t.m - 1)):
        right = sum(t[u + a] for a in t.alphabet)
        left = sum(t[b + u] for b in t.alphabet)
        if right != left:
            bad.append((u, right, left))
    return bad


def realize_words(t: WordWeightSystem) -> list[CyclicWord]:
    """Cyclic words whose summed block counts equal ``t``: one Euler circuit per
    connected component of the de Bruijn multigraph."""
    bad = check_word_switch(t)
    if bad:
        u, right, left = bad[0]
        raise ValueError(f"switch condition fails at {u!r}: {right} != {left}")
    adj: dict[str, list[str]] = defaultdict(list)
    for block in sorted(t.t):
        adj[block[:-1]].extend([block] * t[block])
    for u in adj:
        # popping from the end walks edges in ascending order
        adj[u].reverse()

    words = []
    for start in sorted(adj):
        if not adj[start]:
            continue
        # Hierholzer: circuit of edges (blocks)
        stack = [(start, None)]
        circuit = []
        while stack:
            u, via = stack[-1]
            if adj[u]:
                block = adj[u].pop()
                stack.append((block[1:], block))
            else:
                stack.pop()
                if via is not None:
                    circuit.append(via)
        circuit.reverse()
        words.append(CyclicWord("".join(block[-1] for block in circuit)))
    return words


def word_measure_scale(w: str, k: int, max_length: int = 4, alphabet: str | None = None) -> bool:
    """Check that counts in ``w^k`` are ``k`` times counts in ``w`` for all short patterns."""
    if not w:
        raise ValueError("empty word")
    alphabet = alphabet or "".join(sorted(set(w)))
    base = CyclicWord(w)
    power = CyclicWord(w * k)
    for length in range(1, max_length + 1):
        for v in map("".join, itertools.product(alphabet, repeat=length)):
            if occurrences_cyclic(v, power) != k * occurrences_cyclic(v, base):
                return False
    return True
