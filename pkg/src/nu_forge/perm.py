"""Permutations on ``{0, ..., n-1}`` stored as image arrays.

Permutations act on the right: ``p * q`` applies ``p`` first, then ``q``.
"""

from __future__ import annotations

import re
from math import lcm
from pathlib import Path

import numpy as np

from .errors import DegreeMismatch, InputError

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    __slots__ = ("images", "_hash")

    def __init__(self, images):
        arr = np.array(images, dtype=np.int32, copy=True).reshape(-1)
        if arr.size and not np.array_equal(np.sort(arr), np.arange(arr.size)):
            raise InputError("images do not form a bijection")
        arr.flags.writeable = False
        self.images = arr
        self._hash = None

    @classmethod
    def _trusted(cls, arr):
        p = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.int32)
        arr.flags.writeable = False
        p.images = arr
        p._hash = None
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._trusted(np.arange(degree, dtype=np.int32))

    @classmethod
    def from_cycles(cls, cycles, degree: int | None = None) -> "Permutation":
        cycles = [list(c) for c in cycles]
        top = max((max(c) for c in cycles if c), default=-1)
        n = top + 1 if degree is None else degree
        if top >= n:
            raise DegreeMismatch(f"point {top} exceeds degree {n}")
        img = np.arange(n, dtype=np.int32)
        seen = set()
        for c in cycles:
            for i, a in enumerate(c):
                if a in seen or a < 0:
                    raise InputError(f"point {a} repeated or negative in cycle notation")
                seen.add(a)
                img[a] = c[(i + 1) % len(c)]
        return cls._trusted(img)

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> "Permutation":
        """Parse disjoint-cycle notation such as ``(0 1 2)(3 4)`` or ``()``."""
        text = text.strip()
        if not text or _CYCLE_RE.sub("", text).strip():
            raise InputError(f"bad cycle notation {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(text):
            pts = body.replace(",", " ").split()
            try:
                cycles.append([int(x) for x in pts])
            except ValueError:
                raise InputError(f"bad point in {text!r}") from None
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return self.images.size

    def __getitem__(self, i):
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")
        return Permutation._trusted(other.images[self.images])

    def __invert__(self) -> "Permutation":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.degree, dtype=np.int32)
        return Permutation._trusted(inv)

    inverse = __invert__

    def __pow__(self, n: int) -> "Permutation":
        base = self if n >= 0 else ~self
        result = Permutation.identity(self.degree)
        n = abs(n)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self, by: "Permutation") -> "Permutation":
        """``self^by = by^-1 self by``."""
        return ~by * self * by

    def commutator(self, other: "Permutation") -> "Permutation":
        """``[self, other] = self^-1 other^-1 self other``."""
        return ~self * ~other * self * other

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self.images, other.images)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.images.tobytes())
        return self._hash

    def key(self) -> bytes:
        return self.images.tobytes()

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.degree)))

    def cycles(self) -> list:
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        img = self.images
        for start in range(self.degree):
            if seen[start] or img[start] == start:
                continue
            cyc = [start]
            seen[start] = True
            j = int(img[start])
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = int(img[j])
            out.append(cyc)
        return out

    def order(self) -> int:
        return lcm(1, *(len(c) for c in self.cycles()))

    def __repr__(self):
        return f"Permutation({self})"

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def parse_perm_file(text: str) -> tuple:
    """Generators, one per line in cycle notation, optional ``degree: n`` header."""
    degree = None
    raw = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("degree:"):
            if degree is not None or raw:
                raise InputError(f"line {lineno}: degree header must come first")
            try:
                degree = int(line.split(":", 1)[1])
            except ValueError:
                raise InputError(f"line {lineno}: bad degree") from None
            if degree < 1:
                raise InputError(f"line {lineno}: degree must be positive")
            continue
        raw.append(line)
    if degree is None:
        tops = [max((max(c) for c in _points(t)), default=-1) for t in raw]
        degree = max(tops, default=-1) + 1
        degree = max(degree, 1)
    return [Permutation.parse(t, degree) for t in raw], degree


def _points(text):
    for body in _CYCLE_RE.findall(text):
        pts = body.replace(",", " ").split()
        try:
            yield [int(x) for x in pts] or [-1]
        except ValueError:
            raise InputError(f"bad point in {text!r}") from None


def load_perm_file(path):
    return parse_perm_file(Path(path).read_text())


def order_lcm(orders) -> int:
    return lcm(1, *orders)
