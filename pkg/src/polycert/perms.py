"""Finite permutations and permutation groups with verified stabilizer chains.

Composition convention: ``a * b`` applies ``a`` first, then ``b``, so
``(a * b).apply(x) == b.apply(a.apply(x))``. Words evaluated over
permutations (see :mod:`polycert.words`) therefore act left to right.

``PermutationGroup`` keeps a base and strong generating set built by a
deterministic incremental Schreier-Sims pass: no randomness is involved by
default, so group order, membership answers, and the chain itself are
reproducible across runs. An opt-in randomized mode only shuffles the
exploration order (seeded, default 1729); it changes the internal chain, not
any answer, and is used by the tests as a self-check.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError

MAX_DEGREE = 1 << 22
DEFAULT_SEED = 1729


class Permutation:
    """An immutable permutation of {0, ..., n-1}, backed by an int32 image array."""

    __slots__ = ("images",)

    def __init__(self, images):
        arr = np.array(images, dtype=np.int32, copy=True)
        if arr.ndim != 1:
            raise ValueError("permutation images must be a flat sequence")
        n = arr.shape[0]
        if n == 0:
            raise ValueError("permutation degree must be at least 1")
        if n > MAX_DEGREE:
            raise CapacityError(f"degree {n} exceeds the supported maximum {MAX_DEGREE}")
        if arr.min() < 0 or arr.max() >= n or np.bincount(arr, minlength=n).max() != 1:
            raise ValueError("images do not describe a bijection")
        arr.setflags(write=False)
        object.__setattr__(self, "images", arr)

    @staticmethod
    def _raw(arr: np.ndarray) -> "Permutation":
        """Wrap a known-good image array without re-validating."""
        p = object.__new__(Permutation)
        arr.setflags(write=False)
        object.__setattr__(p, "images", arr)
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        if not 1 <= n <= MAX_DEGREE:
            raise CapacityError(f"degree {n} out of supported range")
        return cls._raw(np.arange(n, dtype=np.int32))

    def identity_like(self) -> "Permutation":
        return Permutation.identity(self.degree)

    @property
    def degree(self) -> int:
        return int(self.images.shape[0])

    def apply(self, point: int) -> int:
        return int(self.images[point])

    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("cannot compose permutations of different degrees")
        return Permutation._raw(other.images[self.images])

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.degree, dtype=np.int32)
        return Permutation._raw(inv)

    def __invert__(self) -> "Permutation":
        return self.inverse()

    def __pow__(self, e: int) -> "Permutation":
        if e < 0:
            return self.inverse() ** (-e)
        result = Permutation.identity(self.degree)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.degree, dtype=np.int32)))

    def order(self) -> int:
        imgs = self.images
        n = self.degree
        seen = np.zeros(n, dtype=bool)
        result = 1
        for start in range(n):
            if seen[start]:
                continue
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = int(imgs[j])
                length += 1
            result = lcm(result, length)
        return result

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point, sorted."""
        imgs = self.images
        n = self.degree
        seen = [False] * n
        out = []
        for start in range(n):
            if seen[start] or int(imgs[start]) == start:
                seen[start] = True
                continue
            cyc = []
            j = start
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = int(imgs[j])
            out.append(tuple(cyc))
        return out

    def key(self) -> bytes:
        return self.images.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return bool(np.array_equal(self.images, other.images))

    def __hash__(self) -> int:
        return hash(self.images.tobytes())

    def __repr__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return f"Permutation(identity, degree={self.degree})"
        shown = " ".join(
            "(" + " ".join(map(str, c)) + ")" for c in cycs[:6])
        if len(cycs) > 6:
            shown += " ..."
        return f"Permutation({shown}, degree={self.degree})"


@dataclass
class _Level:
    """One stabilizer-chain level: a base point, its generators, transversal."""

    base: int
    gens: list[Permutation] = field(default_factory=list)
    orbit: dict[int, Permutation] = field(default_factory=dict)
    seen: set[bytes] = field(default_factory=set)


class PermutationGroup:
    """Group generated by permutations of a common degree.

    The stabilizer chain is built lazily on first use and cached; building is
    guarded by a lock so a group instance can be shared between threads.
    """

    def __init__(self, generators: Iterable[Permutation] = (), degree: int | None = None,
                 randomized: bool = False, seed: int = DEFAULT_SEED):
        gens = tuple(generators)
        for g in gens:
            if not isinstance(g, Permutation):
                raise TypeError(f"not a Permutation: {g!r}")
        if gens:
            degs = {g.degree for g in gens}
            if len(degs) != 1:
                raise ValueError(f"mixed degrees in generator list: {sorted(degs)}")
            inferred = degs.pop()
            if degree is not None and degree != inferred:
                raise ValueError(f"degree {degree} conflicts with generators of degree {inferred}")
            degree = inferred
        if degree is None:
            raise ValueError("degree is required for a group with no generators")
        if not 1 <= degree <= MAX_DEGREE:
            raise CapacityError(f"degree {degree} out of supported range")
        self._generators = gens
        self._degree = degree
        self._randomized = randomized
        self._seed = seed
        self._levels: list[_Level] | None = None
        self._lock = threading.Lock()

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def generators(self) -> tuple[Permutation, ...]:
        return self._generators

    # -- plain orbit machinery (no chain required) --------------------------

    def orbit(self, point: int) -> tuple[int, ...]:
        """The orbit of a point under the whole group, ascending."""
        if not 0 <= point < self._degree:
            raise ValueError(f"point {point} out of range")
        seen = {point}
        frontier = [point]
        while frontier:
            nxt = []
            for pt in frontier:
                for g in self._generators:
                    img = g.apply(pt)
                    if img not in seen:
                        seen.add(img)
                        nxt.append(img)
            frontier = nxt
        return tuple(sorted(seen))

    def orbits(self) -> list[tuple[int, ...]]:
        """All orbits, each ascending, ordered by smallest element."""
        left = set(range(self._degree))
        out = []
        while left:
            o = self.orbit(min(left))
            out.append(o)
            left.difference_update(o)
        return out

    # -- stabilizer chain ----------------------------------------------------

    def _chain(self) -> list[_Level]:
        if self._levels is None:
            with self._lock:
                if self._levels is None:
                    self._levels = self._build()
        return self._levels

    def _build(self, base_prefix: Sequence[int] = ()) -> list[_Level]:
        rng = random.Random(self._seed) if self._randomized else None
        ordered = [g for g in self._generators if not g.is_identity]
        if rng is not None:
            rng.shuffle(ordered)
        levels: list[_Level] = []
        queue: list[tuple[Permutation, int]] = [(g, 0) for g in ordered]
        pos = 0
        while pos < len(queue):
            g, start = queue[pos]
            pos += 1
            residue, j = self._strip(g, levels, start)
            if residue is None:
                continue
            while j >= len(levels):
                idx = len(levels)
                if idx < len(base_prefix):
                    base = base_prefix[idx]
                elif idx == 0:
                    base = self._first_base()
                else:
                    base = _longest_cycle_point(residue)
                lv = _Level(base=base)
                lv.orbit[base] = Permutation.identity(self._degree)
                levels.append(lv)
                if residue.apply(base) != base:
                    break
                j += 1
            key = residue.key()
            if key in levels[j].seen:
                continue
            levels[j].seen.add(key)
            levels[j].gens.append(residue)
            # The new generator lives in every stabilizer down to level j, so
            # it takes part in the orbit of level j *and* of every level
            # above it (it fixes their bases but can move other orbit points).
            for i in range(j, -1, -1):
                queue.extend((h, i + 1)
                             for h in self._extend(levels, i, residue, rng))
        return levels

    def _first_base(self) -> int:
        """Smallest point of a largest orbit of the full generating set."""
        best_len = -1
        best_point = 0
        left = set(range(self._degree))
        while left:
            o = self.orbit(min(left))
            if len(o) > best_len:
                best_len = len(o)
                best_point = o[0]
            left.difference_update(o)
        return best_point

    @staticmethod
    def _strip(g: Permutation, levels: list[_Level], start: int = 0):
        """Sift through the chain; (None, _) if absorbed, else (residue, level)."""
        i = start
        while i < len(levels):
            lv = levels[i]
            x = g.apply(lv.base)
            u = lv.orbit.get(x)
            if u is None:
                return g, i
            g = g * u.inverse()
            i += 1
        if g.is_identity:
            return None, len(levels)
        return g, len(levels)

    def _extend(self, levels: list[_Level], i: int, new_gen: Permutation,
                rng) -> list[Permutation]:
        """Re-close level ``i``'s orbit after ``new_gen`` joined the chain.

        Only the new pairs are scanned: old orbit points against the new
        generator, then every effective generator (this level's and all
        deeper ones) on newly reached points. Pairs handled by earlier
        insertions stay absorbed because the chain only ever grows. Returns
        the fresh Schreier residuals, which belong one level further down.
        A pointwise product comparison skips Schreier elements that are
        trivially the transversal entry itself.
        """
        level = levels[i]
        effective = [g for lv in levels[i:] for g in lv.gens]
        snapshot = list(level.orbit)
        if rng is not None:
            rng.shuffle(snapshot)
        work = [(pt, new_gen) for pt in snapshot]
        out = []
        pos = 0
        while pos < len(work):
            pt, s = work[pos]
            pos += 1
            u = level.orbit[pt]
            img = s.apply(pt)
            prod = u * s
            known = level.orbit.get(img)
            if known is None:
                level.orbit[img] = prod
                work.extend((img, t) for t in effective)
                continue
            if np.array_equal(prod.images, known.images):
                continue
            h = prod * known.inverse()
            k = h.key()
            if k not in level.seen:
                level.seen.add(k)
                out.append(h)
        return out

    # -- queries --------------------------------------------------------------

    def order(self) -> int:
        n = 1
        for lv in self._chain():
            n *= len(lv.orbit)
        return n

    def contains(self, g: Permutation) -> bool:
        if g.degree != self._degree:
            raise ValueError("degree mismatch")
        residue, _ = self._strip(g, self._chain())
        return residue is None

    def __contains__(self, g: Permutation) -> bool:
        return self.contains(g)

    def base(self) -> tuple[int, ...]:
        return tuple(lv.base for lv in self._chain())

    def strong_generators(self) -> tuple[Permutation, ...]:
        return tuple(g for lv in self._chain() for g in lv.gens)

    def stabilizer_of_point(self, point: int) -> "PermutationGroup":
        """The subgroup fixing one point, via a fresh chain based there."""
        if not 0 <= point < self._degree:
            raise ValueError(f"point {point} out of range")
        levels = self._build(base_prefix=(point,))
        inner = tuple(g for lv in levels[1:] for g in lv.gens)
        return PermutationGroup(inner, degree=self._degree)

    def verify_chain(self, mode: str = "full", seed: int = DEFAULT_SEED,
                     samples: int = 50) -> None:
        """Re-check the chain after the fact; raises RuntimeError on any defect.

        ``full`` recomputes every Schreier element of every level and sifts
        it; ``random`` sifts seeded random group elements (products of random
        transversal entries) and random generator words instead.
        """
        levels = self._chain()
        ident = Permutation.identity(self._degree)
        for i, lv in enumerate(levels):
            if lv.orbit.get(lv.base) != ident:
                raise RuntimeError(f"level {i}: base transversal entry is not the identity")
            for pt, u in lv.orbit.items():
                if u.apply(lv.base) != pt:
                    raise RuntimeError(f"level {i}: transversal entry for {pt} is wrong")
            for g in lv.gens:
                for j in range(i):
                    if g.apply(levels[j].base) != levels[j].base:
                        raise RuntimeError(f"level {i}: generator moves an earlier base")
        if mode == "full":
            for i, lv in enumerate(levels):
                effective = [g for deeper in levels[i:] for g in deeper.gens]
                for pt, u in lv.orbit.items():
                    for s in effective:
                        img = s.apply(pt)
                        if img not in lv.orbit:
                            raise RuntimeError(
                                f"level {i}: orbit is not closed at point {pt}")
                        h = (u * s) * lv.orbit[img].inverse()
                        residue, _ = self._strip(h, levels, i + 1)
                        if residue is not None:
                            raise RuntimeError(
                                f"level {i}: Schreier element at point {pt} does not sift")
            for g in self._generators:
                residue, _ = self._strip(g, levels)
                if residue is not None:
                    raise RuntimeError("an original generator does not sift through the chain")
        elif mode == "random":
            rng = random.Random(seed)
            for _ in range(samples):
                g = ident
                for lv in levels:
                    pts = list(lv.orbit)
                    g = g * lv.orbit[pts[rng.randrange(len(pts))]]
                residue, _ = self._strip(g, levels)
                if residue is not None:
                    raise RuntimeError("a random transversal product does not sift")
            if self._generators:
                for _ in range(samples):
                    g = ident
                    for _ in range(rng.randrange(1, 30)):
                        g = g * self._generators[rng.randrange(len(self._generators))]
                    residue, _ = self._strip(g, levels)
                    if residue is not None:
                        raise RuntimeError("a random generator word does not sift")
        else:
            raise ValueError(f"unknown verification mode {mode!r}")


def _longest_cycle_point(g: Permutation) -> int:
    """Smallest point on a longest cycle; base heuristic for fresh levels."""
    best_len = 0
    best_point = 0
    for cyc in g.cycles():
        if len(cyc) > best_len:
            best_len = len(cyc)
            best_point = cyc[0]
    return best_point
