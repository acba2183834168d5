"""Words over indexed generators, and finite presentations built from them.

A word is an immutable sequence of letters ``(generator_index, sign)`` with
``sign`` one of ``+1``/``-1``. Words are freely reduced on construction
(adjacent ``x x^-1`` pairs cancel); reduction modulo involution relations is a
separate, opt-in operation because presentations are kept faithful to how
their relators were written.

Text form
---------

The compact text form writes letters as ``r<i>`` with an optional ``^-1``
suffix, separated by single spaces, e.g. ``"r0 r1 r0^-1"``. The empty word is
written ``"1"``. Presentations serialize one relator per line::

    gens 3
    rel r0 r0
    rel r0 r1 r0 r1

Both forms round-trip through :func:`word_from_text` /
:func:`presentation_from_text`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import InvalidGeneratorError, InvalidWordError

Letter = tuple[int, int]


def _free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for gen, sign in letters:
        if stack and stack[-1][0] == gen and stack[-1][1] == -sign:
            stack.pop()
        else:
            stack.append((gen, sign))
    return tuple(stack)


class Word:
    """An immutable, freely reduced word over nonnegative generator indices."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        checked = []
        for letter in letters:
            try:
                gen, sign = letter
            except (TypeError, ValueError):
                raise InvalidWordError(f"letter {letter!r} is not a (gen, sign) pair")
            if not isinstance(gen, int) or isinstance(gen, bool) or gen < 0:
                raise InvalidWordError(f"generator index {gen!r} must be a nonnegative int")
            if sign not in (1, -1):
                raise InvalidWordError(f"sign {sign!r} must be +1 or -1")
            checked.append((gen, sign))
        object.__setattr__(self, "letters", _free_reduce(checked))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self.letters + other.letters)

    def __invert__(self) -> "Word":
        return self.inverse()

    def inverse(self) -> "Word":
        return Word(tuple((g, -s) for g, s in reversed(self.letters)))

    def max_generator(self) -> int:
        """Largest generator index used, or -1 for the empty word."""
        return max((g for g, _ in self.letters), default=-1)

    def __repr__(self) -> str:
        return f"Word({word_to_text(self)!r})"


def word(letters: Iterable[Letter]) -> Word:
    """Convenience constructor (identical to ``Word(letters)``)."""
    return Word(letters)


def generator(i: int) -> Word:
    """The one-letter word ``r<i>``."""
    return Word([(i, 1)])


def pair(i: int, j: int) -> Word:
    """The two-letter word ``r<i> r<j>``."""
    return Word([(i, 1), (j, 1)])


def reduce(w: Word, involutory: bool = False) -> Word:
    """Reduce ``w``; freely by default, modulo squares when ``involutory``.

    Involutory reduction treats every generator as an involution: signs are
    dropped and adjacent equal letters cancel. Both modes are idempotent.
    """
    if not involutory:
        return Word(w.letters)  # construction re-reduces; already a fixpoint
    stack: list[int] = []
    for gen, _sign in w.letters:
        if stack and stack[-1] == gen:
            stack.pop()
        else:
            stack.append(gen)
    return Word([(g, 1) for g in stack])


def power(w: Word, e: int) -> Word:
    """``w`` concatenated ``e`` times (``e >= 0``), freely reduced."""
    if e < 0:
        raise InvalidWordError("power exponent must be nonnegative")
    return Word(w.letters * e)


def commutator(a: Word, b: Word) -> Word:
    """``a^-1 b^-1 a b``, freely reduced."""
    return Word(a.inverse().letters + b.inverse().letters + a.letters + b.letters)


def conjugate(w: Word, by: Word) -> Word:
    """``by^-1 w by``, freely reduced."""
    return Word(by.inverse().letters + w.letters + by.letters)


def evaluate(w: Word, images: Sequence):
    """Fold ``w`` over ``images`` left to right (the first letter acts first).

    ``images[i]`` stands for generator ``i`` and must support ``*`` (apply
    left factor first) and ``.inverse()``; ``polycert.perms.Permutation``
    does. The empty word evaluates to ``images[0].identity_like()`` when
    available, so at least one image is required.
    """
    result = None
    for gen, sign in w.letters:
        try:
            img = images[gen]
        except IndexError:
            raise InvalidGeneratorError(
                f"word uses generator {gen} but only {len(images)} images given")
        if sign < 0:
            img = img.inverse()
        result = img if result is None else result * img
    if result is None:
        if not images:
            raise InvalidGeneratorError("cannot evaluate the empty word with no images")
        result = images[0].identity_like()
    return result


_TOKEN_RE = re.compile(r"^r(\d+)(\^-1)?$")


def word_to_text(w: Word) -> str:
    if not w.letters:
        return "1"
    parts = []
    for gen, sign in w.letters:
        parts.append(f"r{gen}" if sign > 0 else f"r{gen}^-1")
    return " ".join(parts)


def word_from_text(text: str) -> Word:
    text = text.strip()
    if text == "1" or text == "":
        return Word()
    letters = []
    for token in text.split():
        m = _TOKEN_RE.match(token)
        if m is None:
            raise InvalidWordError(f"bad word token {token!r}")
        letters.append((int(m.group(1)), -1 if m.group(2) else 1))
    return Word(letters)


@dataclass(frozen=True)
class Presentation:
    """A finite presentation: ``generator_count`` generators and relator words."""

    generator_count: int
    relators: tuple[Word, ...]

    def __init__(self, generator_count: int, relators: Iterable[Word]):
        if generator_count < 1:
            raise InvalidGeneratorError("a presentation needs at least one generator")
        rels = tuple(relators)
        for r in rels:
            if not isinstance(r, Word):
                raise InvalidWordError(f"relator {r!r} is not a Word")
            if r.max_generator() >= generator_count:
                raise InvalidGeneratorError(
                    f"relator {word_to_text(r)!r} uses generator r{r.max_generator()} "
                    f"but the presentation has {generator_count} generators")
        object.__setattr__(self, "generator_count", generator_count)
        object.__setattr__(self, "relators", rels)

    def involutory_generators(self) -> frozenset[int]:
        """Generators ``i`` with an explicit square relator ``r_i r_i``."""
        out = set()
        for r in self.relators:
            if len(r) == 2:
                (g1, s1), (g2, s2) = r.letters
                if g1 == g2 and s1 == s2:
                    out.add(g1)
        return frozenset(out)

    def to_text(self) -> str:
        lines = [f"gens {self.generator_count}"]
        lines.extend(f"rel {word_to_text(r)}" for r in self.relators)
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return (f"Presentation(generators={self.generator_count}, "
                f"relators={len(self.relators)})")


def presentation_from_text(text: str) -> Presentation:
    gen_count = None
    relators = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "gens":
            try:
                gen_count = int(rest)
            except ValueError:
                raise InvalidWordError(f"bad generator count line {line!r}")
        elif head == "rel":
            relators.append(word_from_text(rest))
        else:
            raise InvalidWordError(f"unrecognized presentation line {line!r}")
    if gen_count is None:
        raise InvalidWordError("presentation text missing a 'gens <n>' line")
    return Presentation(gen_count, relators)
