"""Certification of string-group structure for finitely presented groups.

The checks here decide, computationally and from scratch, whether a
presented group with involution generators is a string C-group: generators
really are involutions, non-adjacent generators commute, and standard
subgroups intersect exactly as their generator sets do. The intersection
check comes in two modes that must agree: ``full`` compares every pair of
generator subsets, ``recursive`` walks intervals of the generator string and
checks one boundary intersection per interval, which is equivalent for
groups that pass the involution and commutation checks and far cheaper.

``certify`` bundles the checks into a ``SggiCertificate``; downstream
consumers (face lattices, the atlas) refuse uncertified input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

from .coset import EnumerationLimits
from .errors import (
    HomomorphismError,
    ParameterError,
    UncertifiedInputError,
)
from .realize import RealizedGroup, realize
from .words import Presentation, Word, commutator, generator, pair, word_to_text


@dataclass(frozen=True)
class SggiSpec:
    """A presentation put forward as a string group, with its declared type.

    Requires an explicit square relator for every generator up front, so that
    obviously malformed input fails early rather than after an enumeration.
    The declared type entries are the intended orders of the adjacent
    products; the certificate warns when the group disagrees.
    """

    presentation: Presentation
    declared_type: tuple[int, ...] | None = None

    def __post_init__(self):
        involutory = self.presentation.involutory_generators()
        missing = [i for i in range(self.presentation.generator_count)
                   if i not in involutory]
        if missing:
            raise ParameterError(
                f"generators {missing} have no square relator; "
                f"a string group candidate declares every generator an involution")
        if self.declared_type is not None:
            declared = tuple(self.declared_type)
            if len(declared) != self.presentation.generator_count - 1:
                raise ParameterError(
                    f"declared type needs {self.presentation.generator_count - 1} "
                    f"entries, got {len(declared)}")
            object.__setattr__(self, "declared_type", declared)


@dataclass(frozen=True)
class IntersectionEvidence:
    """One checked identity |<left> n <right>| == expected."""

    left: tuple[int, ...]
    right: tuple[int, ...]
    got: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.got == self.expected


def check_involutions(realized: RealizedGroup) -> tuple[int, ...]:
    """Element orders of the generators (1 marks a collapsed generator)."""
    return tuple(realized.element_order(generator(i)) for i in range(realized.rank))


def check_string_property(realized: RealizedGroup) -> tuple[bool, tuple[tuple[int, int], ...]]:
    """Do all non-adjacent generator pairs commute? Returns (ok, offending pairs)."""
    bad = []
    for i in range(realized.rank):
        for j in range(i + 2, realized.rank):
            if realized.element_of(commutator(generator(i), generator(j))) != 0:
                bad.append((i, j))
    return (not bad, tuple(bad))


def schlafli_type(realized: RealizedGroup) -> tuple[int, ...]:
    """Orders of the adjacent products r_i r_{i+1}, left to right."""
    return tuple(realized.element_order(pair(i, i + 1))
                 for i in range(realized.rank - 1))


def _all_subsets(rank: int) -> list[tuple[int, ...]]:
    return [s for r in range(rank + 1)
            for s in itertools.combinations(range(rank), r)]


def check_intersection_property_full(
        realized: RealizedGroup,
        pruned: bool = True) -> tuple[bool, tuple[IntersectionEvidence, ...]]:
    """Check |G_I n G_J| == |G_{I n J}| over subset pairs.

    With ``pruned`` (the default) comparable pairs are skipped: when I is
    contained in J the identity holds by definition, so only incomparable
    pairs carry information. Pass ``pruned=False`` for the fully exhaustive
    sweep; both must return the same verdict.
    """
    subsets = _all_subsets(realized.rank)
    evidence = []
    ok = True
    for a, b in itertools.combinations(subsets, 2):
        sa, sb = set(a), set(b)
        if pruned and (sa <= sb or sb <= sa):
            continue
        got = realized.intersection_order(a, b)
        expected = realized.parabolic_order(sa & sb)
        row = IntersectionEvidence(a, b, got, expected)
        evidence.append(row)
        ok = ok and row.ok
    evidence.sort(key=lambda r: (len(r.left) + len(r.right), r.left, r.right))
    return ok, tuple(evidence)


def check_intersection_property_recursive(
        realized: RealizedGroup) -> tuple[bool, tuple[IntersectionEvidence, ...]]:
    """Interval recursion: an interval [i, j] of the generator string passes
    when both its end-trimmed subintervals pass and the boundary identity
    |G_[i, j-1] n G_[i+1, j]| == |G_[i+1, j-1]| holds.

    For groups with involution generators and the commutation pattern of a
    string group, the verdict agrees with the full subset sweep; evidence is
    emitted shortest interval first, left to right.
    """
    rank = realized.rank
    evidence = []
    ok = True
    for length in range(2, rank + 1):
        for i in range(rank - length + 1):
            j = i + length - 1
            left = tuple(range(i, j))
            right = tuple(range(i + 1, j + 1))
            middle = tuple(range(i + 1, j))
            got = realized.intersection_order(left, right)
            expected = realized.parabolic_order(middle)
            row = IntersectionEvidence(left, right, got, expected)
            evidence.append(row)
            ok = ok and row.ok
    return ok, tuple(evidence)


@dataclass(frozen=True)
class SggiCertificate:
    """The outcome of certifying one presentation.

    ``passed`` means the group is a verified string C-group: involutions,
    string commutation, and the intersection property all hold. ``tight``
    flags orders meeting the lower bound of twice the product of the type;
    ``degenerate`` flags type entries below 3; ``minimal`` records whether
    every corank-1 standard subgroup is proper (so faces of every rank exist).
    """

    presentation: Presentation
    order: int
    schlafli_type: tuple[int, ...]
    declared_type: tuple[int, ...] | None
    involution_orders: tuple[int, ...]
    involutions_ok: bool
    string_ok: bool
    string_failures: tuple[tuple[int, int], ...]
    intersection_ok: bool
    intersection_mode: str
    intersection_evidence: tuple[IntersectionEvidence, ...]
    parabolic_orders: tuple[tuple[tuple[int, ...], int], ...]
    degenerate: bool
    tight: bool
    minimal: bool
    warnings: tuple[str, ...]

    @property
    def rank(self) -> int:
        return self.presentation.generator_count

    @property
    def passed(self) -> bool:
        return self.involutions_ok and self.string_ok and self.intersection_ok


def certify(spec: SggiSpec | Presentation,
            mode: str = "recursive",
            limits: EnumerationLimits | None = None,
            strategy: str = "hlt") -> SggiCertificate:
    """Certify one presentation; see ``SggiCertificate`` for what is checked."""
    if isinstance(spec, Presentation):
        spec = SggiSpec(spec)
    if mode not in ("recursive", "full"):
        raise ValueError(f"unknown intersection mode {mode!r}")
    p = spec.presentation
    rank = p.generator_count
    rg = realize(p, limits, strategy)
    inv_orders = check_involutions(rg)
    involutions_ok = all(o == 2 for o in inv_orders)
    string_ok, string_bad = check_string_property(rg)
    stype = schlafli_type(rg)
    warnings: list[str] = []
    for i, o in enumerate(inv_orders):
        if o == 1:
            warnings.append(f"generator r{i} collapsed to the identity")
    if spec.declared_type is not None:
        for i, (want, got) in enumerate(zip(spec.declared_type, stype)):
            if want != got:
                warnings.append(
                    f"adjacent product r{i} r{i + 1} has order {got}, "
                    f"declared {want}")
    if mode == "recursive":
        inter_ok, evidence = check_intersection_property_recursive(rg)
    else:
        inter_ok, evidence = check_intersection_property_full(rg)
    maximal = []
    for i in range(rank):
        subset = tuple(x for x in range(rank) if x != i)
        maximal.append((subset, rg.parabolic_order(subset)))
    degenerate = any(t < 3 for t in stype)
    tight = rank >= 2 and rg.order == 2 * prod(stype)
    minimal = all(o < rg.order for _, o in maximal) if rank >= 1 else True
    return SggiCertificate(
        presentation=p,
        order=rg.order,
        schlafli_type=stype,
        declared_type=spec.declared_type,
        involution_orders=inv_orders,
        involutions_ok=involutions_ok,
        string_ok=string_ok,
        string_failures=string_bad,
        intersection_ok=inter_ok,
        intersection_mode=mode,
        intersection_evidence=evidence,
        parabolic_orders=tuple(maximal),
        degenerate=degenerate,
        tight=tight,
        minimal=minimal,
        warnings=tuple(warnings),
    )


def check_homomorphism(source: Presentation,
                       target: Presentation,
                       images: Sequence[Word],
                       limits: EnumerationLimits | None = None) -> None:
    """Confirm r_i -> images[i] extends to a homomorphism source -> target.

    Every source relator, rewritten through the images, must evaluate to the
    identity of the target; the first that does not raises
    ``HomomorphismError`` carrying the offending relator.
    """
    if len(images) != source.generator_count:
        raise ParameterError(
            f"need {source.generator_count} images, got {len(images)}")
    for im in images:
        if not isinstance(im, Word):
            raise ParameterError(f"image {im!r} is not a Word")
        if im.max_generator() >= target.generator_count:
            raise ParameterError(
                f"image {word_to_text(im)!r} uses generators beyond the target's rank")
    rt = realize(target, limits)
    for rel in source.relators:
        substituted = Word()
        for g, s in rel:
            substituted = substituted * (images[g] if s > 0 else images[g].inverse())
        if rt.element_of(substituted) != 0:
            raise HomomorphismError(
                f"relator {word_to_text(rel)!r} does not vanish under the "
                f"generator mapping", relator=rel)


def identity_generator_images(rank: int) -> list[Word]:
    """The mapping r_i -> r_i, for same-rank quotient comparisons."""
    return [generator(i) for i in range(rank)]


@dataclass(frozen=True)
class QuotientCheckResult:
    """Outcome of the section-injectivity quotient test."""

    ok: bool
    side: str
    source_order: int
    target_order: int
    source_section_order: int
    target_section_order: int
    messages: tuple[str, ...]


def quotient_criterion(source: Presentation,
                       target: Presentation,
                       side: str = "facet",
                       source_certificate: SggiCertificate | None = None,
                       limits: EnumerationLimits | None = None) -> QuotientCheckResult:
    """Certify a same-rank quotient target of a certified string C-group.

    The criterion: the generator-to-generator mapping is a homomorphism, and
    it is injective on one terminal section (the ``facet`` side drops the last
    generator, the ``vertex`` side drops the first). Injectivity is decided
    by comparing the section's order on both sides, since the mapping carries
    the source section onto the target section. When it holds, the target is
    itself a string C-group.
    """
    if side not in ("facet", "vertex"):
        raise ValueError(f"side must be 'facet' or 'vertex', not {side!r}")
    if source.generator_count != target.generator_count:
        raise ParameterError(
            f"quotient comparison needs equal ranks; "
            f"got {source.generator_count} and {target.generator_count}")
    if source_certificate is None:
        source_certificate = certify(source, limits=limits)
    if source_certificate.presentation != source:
        raise UncertifiedInputError(
            "the supplied certificate does not belong to the source presentation")
    if not source_certificate.passed:
        raise UncertifiedInputError(
            "the source presentation is not a certified string C-group")
    check_homomorphism(source, target,
                       identity_generator_images(source.generator_count), limits)
    rank = source.generator_count
    if side == "facet":
        subset = tuple(range(rank - 1))
    else:
        subset = tuple(range(1, rank))
    src_section = realize(source, limits).parabolic_order(subset)
    tgt_section = realize(target, limits).parabolic_order(subset)
    src_order = realize(source, limits).order
    tgt_order = realize(target, limits).order
    messages = []
    ok = src_section == tgt_section
    if ok:
        messages.append(
            f"{side} section order {src_section} agrees; the target inherits "
            f"the string C-group property")
    else:
        messages.append(
            f"{side} section order differs: source {src_section}, "
            f"target {tgt_section}; no conclusion")
    return QuotientCheckResult(
        ok=ok,
        side=side,
        source_order=src_order,
        target_order=tgt_order,
        source_section_order=src_section,
        target_section_order=tgt_section,
        messages=tuple(messages),
    )
