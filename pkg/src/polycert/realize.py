"""Concrete realizations of finitely presented groups via their regular action.

A ``RealizedGroup`` runs one coset enumeration over the trivial subgroup, so
group elements are coset ids (0 is the identity) and each generator is a
right-multiplication array over the elements. Everything else is derived from
that single table without further enumerations:

* the order of a standard (parabolic) subgroup is the size of the orbit of
  the identity under right multiplication by the chosen generators, read off
  a quotient partition;
* the left cosets w<S> for a generator subset S are the orbits of right
  multiplication by S, giving a quotient map phi and a left action of the
  whole group on the coset space;
* the order of an intersection of two parabolics comes from the
  orbit-stabilizer identity: the moving side acts on the coset space of the
  modulus side, and the orbit of the trivial coset has length
  |mover| / |mover intersect modulus|. The action on cosets may be unfaithful;
  the identity above is exact regardless, because the mover's order is taken
  from the faithful regular table, not from its image.

``stats`` counts the table-building passes (one enumeration plus the lazily
built quotient partitions); certifying a group costs exactly one enumeration
and a few quotient partitions per generator.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from typing import Iterable

import numpy as np

from .coset import EnumerationLimits, enumerate_cosets
from .errors import InvalidGeneratorError
from .words import Presentation, Word


class Quotient:
    """The set of left cosets w<S>, with the left action of the group on it.

    ``phi`` maps each element id to its coset id; coset ids are assigned in
    order of their smallest element, and ``reps`` holds that smallest element.
    """

    __slots__ = ("subset", "phi", "reps", "size", "_realized", "_actions")

    def __init__(self, realized: "RealizedGroup", subset: frozenset[int]):
        self._realized = realized
        self.subset = subset
        n = realized.order
        phi = np.full(n, -1, dtype=np.int32)
        reps: list[int] = []
        rights = [realized.right[g] for g in sorted(subset)]
        for e in range(n):
            if phi[e] >= 0:
                continue
            cid = len(reps)
            reps.append(e)
            phi[e] = cid
            stack = [e]
            while stack:
                u = stack.pop()
                for arr in rights:
                    v = int(arr[u])
                    if phi[v] < 0:
                        phi[v] = cid
                        stack.append(v)
        phi.setflags(write=False)
        self.phi = phi
        self.reps = np.array(reps, dtype=np.int32)
        self.size = len(reps)
        self._actions: dict[int, np.ndarray] = {}

    def action(self, gen: int) -> np.ndarray:
        """Left multiplication by one generator, as a coset-id image array."""
        cached = self._actions.get(gen)
        if cached is None:
            lam = self._realized.left_array(gen)
            cached = self.phi[lam[self.reps]]
            cached.setflags(write=False)
            self._actions[gen] = cached
        return cached


class RealizedGroup:
    """A finitely presented group realized on its own elements."""

    def __init__(self, presentation: Presentation,
                 limits: EnumerationLimits | None = None,
                 strategy: str = "hlt"):
        self.presentation = presentation
        self.table = enumerate_cosets(presentation, (), limits, strategy)
        self.order = self.table.live_count
        matrix = np.asarray(self.table.table, dtype=np.int32)
        cols = self.table.columns
        self._matrix = matrix
        self.right = [matrix[:, cols.fwd[g]].copy() for g in range(presentation.generator_count)]
        for arr in self.right:
            arr.setflags(write=False)
        self.stats: Counter = Counter(enumerations=1)
        self._left: dict[int, np.ndarray] = {}
        self._left_inv: dict[int, np.ndarray] = {}
        self._quotients: dict[frozenset[int], Quotient] = {}
        self._parabolic: dict[frozenset[int], int] = {}
        self._intersections: dict[frozenset[frozenset[int]], int] = {}
        self._element_orders: dict[Word, int] = {}

    @property
    def rank(self) -> int:
        return self.presentation.generator_count

    def _check_subset(self, subset: Iterable[int]) -> frozenset[int]:
        fs = frozenset(subset)
        for i in fs:
            if not 0 <= i < self.rank:
                raise InvalidGeneratorError(
                    f"generator index {i} out of range for rank {self.rank}")
        return fs

    # -- elements -------------------------------------------------------------

    def element_of(self, w: Word) -> int:
        """Element id of a word (the image of the identity under its trace)."""
        return self.table.trace(0, w)

    def element_order(self, w: Word) -> int:
        """Multiplicative order of the element a word represents."""
        cached = self._element_orders.get(w)
        if cached is not None:
            return cached
        cur = self.table.trace(0, w)
        n = 1
        while cur != 0:
            cur = self.table.trace(cur, w)
            n += 1
        self._element_orders[w] = n
        return n

    # -- left multiplication ----------------------------------------------------

    def left_array(self, gen: int) -> np.ndarray:
        """Left multiplication by one generator, as an element-id image array.

        Built by one sweep over the standardized table: the identity row seeds
        lam[gen-image of 0], and lam(e * x) = lam(e) * x extends it. The
        standardized numbering discovers every element before its row is
        scanned, so a single ascending pass fills the whole array.
        """
        cached = self._left.get(gen)
        if cached is not None:
            return cached
        if not 0 <= gen < self.rank:
            raise InvalidGeneratorError(f"generator index {gen} out of range")
        matrix = self._matrix
        n = self.order
        lam = np.full(n, -1, dtype=np.int32)
        lam[0] = self.right[gen][0]
        ncols = matrix.shape[1]
        for e in range(n):
            le = lam[e]
            if le < 0:
                raise InvalidGeneratorError("table numbering is not in discovery order")
            row = matrix[e]
            target = matrix[le]
            for c in range(ncols):
                v = row[c]
                if lam[v] < 0:
                    lam[v] = target[c]
        lam.setflags(write=False)
        self._left[gen] = lam
        self.stats["left_arrays"] += 1
        return lam

    def _left_inverse_array(self, gen: int) -> np.ndarray:
        cached = self._left_inv.get(gen)
        if cached is None:
            lam = self.left_array(gen)
            cached = np.empty_like(lam)
            cached[lam] = np.arange(self.order, dtype=np.int32)
            cached.setflags(write=False)
            self._left_inv[gen] = cached
        return cached

    def left_word_array(self, w: Word) -> np.ndarray:
        """Left multiplication by a whole word (first letter outermost)."""
        acc: np.ndarray | None = None
        for g, s in w:
            lam = self.left_array(g) if s > 0 else self._left_inverse_array(g)
            acc = lam if acc is None else acc[lam]
        if acc is None:
            return np.arange(self.order, dtype=np.int32)
        return acc

    # -- parabolic subgroups -----------------------------------------------------

    def quotient(self, subset: Iterable[int]) -> Quotient:
        fs = self._check_subset(subset)
        q = self._quotients.get(fs)
        if q is None:
            q = Quotient(self, fs)
            self._quotients[fs] = q
            self.stats["quotient_actions"] += 1
        return q

    def parabolic_order(self, subset: Iterable[int]) -> int:
        """Order of the subgroup spanned by a subset of the generators."""
        fs = self._check_subset(subset)
        cached = self._parabolic.get(fs)
        if cached is not None:
            return cached
        n = self._parabolic_order_uncached(fs)
        self._parabolic[fs] = n
        return n

    def _parabolic_order_uncached(self, fs: frozenset[int]) -> int:
        if not fs:
            return 1
        if len(fs) == 1:
            (g,) = fs
            return self.element_order(Word([(g, 1)]))
        if len(fs) == 2:
            a, b = sorted(fs)
            ea = int(self.right[a][0])
            eb = int(self.right[b][0])
            if ea == 0 or eb == 0 or ea == eb:
                # a collapsed or repeated generator: the pair spans a cyclic group
                sub = fs - {a} if ea == 0 else fs - {b} if eb == 0 else {a}
                return self._parabolic_order_uncached(frozenset(sub))
            oa = self.element_order(Word([(a, 1)]))
            ob = self.element_order(Word([(b, 1)]))
            if oa == 2 and ob == 2:
                # two distinct involutions span a dihedral group
                return 2 * self.element_order(Word([(a, 1), (b, 1)]))
        if len(fs) == self.rank:
            return self.order
        q = self._quotients.get(fs)
        if q is None:
            q = self.quotient(fs)
        return self.order // q.size

    def intersection_order(self, left: Iterable[int], right: Iterable[int]) -> int:
        """Order of the intersection of two parabolic subgroups.

        The side with the larger parabolic is used as the modulus (ties go to
        ``right``); the other side's orbit of the trivial coset gives the
        answer by orbit-stabilizer. Exact even when the coset action of the
        moving side is unfaithful.
        """
        fs_l = self._check_subset(left)
        fs_r = self._check_subset(right)
        if fs_l <= fs_r:
            return self.parabolic_order(fs_l)
        if fs_r <= fs_l:
            return self.parabolic_order(fs_r)
        key = frozenset((fs_l, fs_r))
        cached = self._intersections.get(key)
        if cached is not None:
            return cached
        if len(fs_l) == 1 and len(fs_r) == 1:
            # two cyclic subgroups: intersect their element sets directly
            (a,) = fs_l
            (b,) = fs_r
            result = len(self._cyclic_elements(a) & self._cyclic_elements(b))
            self._intersections[key] = result
            return result
        o_l = self.parabolic_order(fs_l)
        o_r = self.parabolic_order(fs_r)
        if o_l > o_r:
            modulus, mover, mover_order = fs_l, fs_r, o_r
        else:
            modulus, mover, mover_order = fs_r, fs_l, o_l
        if mover_order == 1:
            self._intersections[key] = 1
            return 1
        q = self.quotient(modulus)
        actions = [q.action(g) for g in sorted(mover)]
        start = int(q.phi[0])
        seen = {start}
        stack = [start]
        while stack:
            c = stack.pop()
            for arr in actions:
                img = int(arr[c])
                if img not in seen:
                    seen.add(img)
                    stack.append(img)
        result = mover_order // len(seen)
        self._intersections[key] = result
        return result

    def _cyclic_elements(self, gen: int) -> frozenset[int]:
        """Element ids of the cyclic subgroup spanned by one generator."""
        arr = self.right[gen]
        out = {0}
        cur = int(arr[0])
        while cur != 0:
            out.add(cur)
            cur = int(arr[cur])
        return frozenset(out)

    def regular_permutation_group(self):
        """The regular permutation representation as a PermutationGroup."""
        from .perms import PermutationGroup

        return PermutationGroup(self.table.to_permutations(), degree=self.order)


@lru_cache(maxsize=32)
def _realize_cached(presentation: Presentation, limits: EnumerationLimits,
                    strategy: str) -> RealizedGroup:
    return RealizedGroup(presentation, limits, strategy)


def realize(presentation: Presentation,
            limits: EnumerationLimits | None = None,
            strategy: str = "hlt") -> RealizedGroup:
    """Shared-realization cache; same presentation, same object.

    Arguments are normalized first, so the default limits spelled as None
    and spelled out explicitly share one cache entry.
    """
    if limits is None:
        limits = EnumerationLimits()
    return _realize_cached(presentation, limits, strategy)


def parabolic_intersection_order(presentation: Presentation,
                                 left: Iterable[int],
                                 right: Iterable[int],
                                 limits: EnumerationLimits | None = None) -> int:
    """Order of the intersection of two parabolic subgroups of a presented group."""
    return realize(presentation, limits).intersection_order(left, right)
