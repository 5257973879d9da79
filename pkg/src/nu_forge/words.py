"""Words over a generator alphabet and finitely presented groups.

A word is a tuple of nonzero ints: letter ``k`` stands for generator ``k - 1``
and ``-k`` for its inverse.  This packs the (id, sign) pair of a generator
symbol into one value, so words hash, compare and slice like tuples.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import PresentationError, UnknownGenerator, WordSyntaxError

Word = tuple  # tuple[int, ...]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def letter(gen: int, sign: int = 1) -> int:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return sign * (gen + 1)


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def power(w: Sequence[int], n: int) -> Word:
    base = tuple(w) if n >= 0 else inverse(w)
    return free_reduce(base * abs(n))


def commutator(a: Sequence[int], b: Sequence[int]) -> Word:
    """``[a, b] = a^-1 b^-1 a b``."""
    return free_reduce(inverse(a) + inverse(b) + tuple(a) + tuple(b))


def conjugate(w: Sequence[int], by: Sequence[int]) -> Word:
    """``w^by = by^-1 w by``."""
    return free_reduce(inverse(by) + tuple(w) + tuple(by))


def word_to_str(w: Sequence[int], names: Sequence[str]) -> str:
    if not w:
        return "1"
    parts = []
    for x in w:
        name = names[abs(x) - 1]
        if x > 0:
            parts.append(name)
        elif len(name) == 1 and name.swapcase() not in names:
            parts.append(name.swapcase())
        else:
            parts.append(f"{name}^-1")
    return "*".join(parts)


class _Parser:
    def __init__(self, text: str, gens: Sequence[str]):
        self.text = text
        self.pos = 0
        self.index = {name: i for i, name in enumerate(gens)}
        # longest names first so that "ab" as a declared name wins over a*b
        self.names = sorted(gens, key=len, reverse=True)

    def error(self, message):
        raise WordSyntaxError(message, self.pos)

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self) -> Word:
        w = self.product()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return w

    def product(self) -> Word:
        out: list[int] = []
        while True:
            ch = self.peek()
            if ch == "*":
                if not out:
                    self.error("dangling '*'")
                self.pos += 1
                ch = self.peek()
                if not ch or ch in ")],*^":
                    self.error("missing factor after '*'")
            if not ch or ch in ")],":
                break
            out.extend(self.term())
        return free_reduce(out)

    def term(self) -> Word:
        w = self.atom()
        while self.peek() == "^":
            self.pos += 1
            self.peek()
            m = re.compile(r"[+-]?\d+").match(self.text, self.pos)
            if not m:
                self.error("expected integer exponent")
            self.pos = m.end()
            w = power(w, int(m.group()))
        return w

    def atom(self) -> Word:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            w = self.product()
            self.expect(")")
            return w
        if ch == "[":
            self.pos += 1
            parts = [self.product()]
            while self.peek() == ",":
                self.pos += 1
                parts.append(self.product())
            self.expect("]")
            if len(parts) < 2:
                self.error("commutator needs at least two entries")
            w = parts[0]
            for p in parts[1:]:
                w = commutator(w, p)
            return w
        if ch == "1":
            self.pos += 1
            return ()
        m = _NAME_RE.match(self.text, self.pos)
        if not m:
            self.error(f"unexpected {ch!r}" if ch else "unexpected end of input")
        self.pos = m.end()
        return self.split_run(m.group(), m.start())

    def split_run(self, run: str, start: int) -> Word:
        out: list[int] = []
        i = 0
        while i < len(run):
            for name in self.names:
                if run.startswith(name, i):
                    out.append(self.index[name] + 1)
                    i += len(name)
                    break
            else:
                ch = run[i]
                flipped = ch.swapcase()
                if flipped != ch and flipped in self.index:
                    out.append(-(self.index[flipped] + 1))
                    i += 1
                else:
                    rest = _NAME_RE.match(run, i)
                    raise UnknownGenerator(rest.group() if rest else ch)
        return tuple(out)


def parse_word(text: str, gens: Sequence[str]) -> Word:
    """Parse ``text`` into a freely reduced word over ``gens``.

    Products are written by juxtaposition or ``*``, ``x^n`` takes integer
    powers, ``[x,y]`` is ``x^-1 y^-1 x y`` (longer brackets are left-normed)
    and a single-letter generator's inverse may be written by flipping case.
    """
    return _Parser(text, gens).parse()


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple
    relators: tuple

    def __post_init__(self):
        names = tuple(self.generator_names)
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relators", tuple(tuple(r) for r in self.relators))
        if len(set(names)) != len(names):
            raise PresentationError("generator names must be unique")
        for name in names:
            if not name or not _NAME_RE.fullmatch(name):
                raise PresentationError(f"bad generator name {name!r}")
        n = len(names)
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > n:
                    raise PresentationError(f"relator letter {x} out of range")

    @property
    def n_gens(self) -> int:
        return len(self.generator_names)

    def to_text(self) -> str:
        lines = ["gens: " + ", ".join(self.generator_names)]
        lines += ["rel: " + word_to_str(r, self.generator_names) for r in self.relators]
        return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> Presentation:
    gens = None
    relators = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if not sep:
            raise PresentationError(f"line {lineno}: expected 'gens:' or 'rel:'")
        if key == "gens":
            if gens is not None:
                raise PresentationError(f"line {lineno}: duplicate gens line")
            gens = [g.strip() for g in value.split(",") if g.strip()]
        elif key == "rel":
            if gens is None:
                raise PresentationError(f"line {lineno}: rel before gens")
            relators.append(parse_word(value, gens))
        else:
            raise PresentationError(f"line {lineno}: unknown key {key!r}")
    if gens is None:
        raise PresentationError("missing 'gens:' line")
    return Presentation(tuple(gens), tuple(relators))


def load_presentation(path) -> Presentation:
    return parse_presentation(Path(path).read_text())
