"""
Multiplicity uples and exact binomial coefficients.

A uple is an ordered vector of signed integers (multiplicities or generator
degrees). Entries are kept as given, negative ones included; comparisons
between uples work on their sorted positive parts.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Tuple

from fatpoints.services.errors import UsageError

_REPEAT = re.compile(r'^\s*(-?\d+)\s*[xX*]\s*(\d+)\s*$')


def binomial(a: int, b: int) -> int:
    """C(a, b), extended by zero when a < b or b < 0"""
    if b < 0 or a < b:
        return 0
    return math.comb(a, b)


@dataclass(frozen=True)
class Uple:
    entries: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'entries', tuple(int(e) for e in self.entries))

    @classmethod
    def of(cls, *entries: int) -> "Uple":
        return cls(tuple(entries))

    @classmethod
    def parse(cls, text: str) -> "Uple":
        """Parse '2,2,3' or the shorthand '3x10' (pieces may be mixed: '4,3x2')"""
        if text is None or not text.strip():
            return cls(())
        entries = []
        for piece in text.split(','):
            piece = piece.strip()
            if not piece:
                raise UsageError(f"empty entry in uple {text!r}")
            repeat = _REPEAT.match(piece)
            if repeat:
                entries.extend([int(repeat.group(1))] * int(repeat.group(2)))
                continue
            try:
                entries.append(int(piece))
            except ValueError:
                raise UsageError(f"cannot read {piece!r} in uple {text!r}") from None
        return cls(tuple(entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, index):
        return self.entries[index]

    def __str__(self) -> str:
        return ",".join(str(e) for e in self.entries)

    def positive_part(self) -> "Uple":
        return Uple(tuple(e for e in self.entries if e > 0))

    def size(self) -> int:
        """|A| = sum of max(a_i, 0)"""
        return sum(e for e in self.entries if e > 0)

    def length(self) -> int:
        """l(A) = number of positive entries"""
        return sum(1 for e in self.entries if e > 0)

    def canonical(self) -> "Uple":
        """Positive part sorted descending; the key used for memo and cache"""
        return Uple(tuple(sorted(self.positive_part().entries, reverse=True)))

    def sorted_desc(self) -> "Uple":
        return Uple(tuple(sorted(self.entries, reverse=True)))

    def equivalent(self, other: "Uple") -> bool:
        return self.canonical() == other.canonical()

    def contains(self, other: "Uple") -> bool:
        """other ⊆ self as multisets of positive entries"""
        mine = Counter(self.positive_part().entries)
        theirs = Counter(other.positive_part().entries)
        return all(mine[value] >= count for value, count in theirs.items())

    def dominated_by(self, other: "Uple") -> bool:
        """self ≤ other: same length, entrywise ≤ after sorting both descending"""
        a, b = self.canonical().entries, other.canonical().entries
        return len(a) == len(b) and all(x <= y for x, y in zip(a, b))

    def is_homogeneous(self) -> bool:
        return len(set(self.positive_part().entries)) <= 1

    def is_quasihomogeneous(self) -> bool:
        """k_2 = ... = k_d after sorting descending"""
        return len(set(self.canonical().entries[1:])) <= 1

    def prefix(self, count: int) -> "Uple":
        return Uple(self.entries[:count])

    def with_entry(self, index: int, value: int) -> "Uple":
        entries = list(self.entries)
        entries[index] = value
        return Uple(tuple(entries))


def shift(uple: Uple, r: int) -> Uple:
    """A + r̄; no clamping, callers take positive_part() when they need it"""
    return Uple(tuple(e + r for e in uple.entries))


def sub_multisets(uple: Uple) -> Iterator[Tuple[Uple, int]]:
    """
    Distinct sub-multisets of the positive part, each with the number of
    index subsets realizing it. Grouping by value keeps this polynomial for
    (quasi)homogeneous uples: prod(c_i + 1) items instead of 2^l(A).
    """
    groups = sorted(Counter(uple.positive_part().entries).items(), reverse=True)
    values = [value for value, _ in groups]
    ranges = [range(count + 1) for _, count in groups]
    for chosen in itertools.product(*ranges):
        weight = 1
        entries = []
        for value, (_, count), take in zip(values, groups, chosen):
            weight *= math.comb(count, take)
            entries.extend([value] * take)
        yield Uple(tuple(entries)), weight
