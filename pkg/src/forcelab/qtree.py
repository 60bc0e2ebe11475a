"""Subset-stage trees, their isomorphism with injective sequences, and
trees of strictly decreasing sequences from a lattice with the finite
predecessor property.

A subset-stage condition records, stage by stage, the set of values seen so
far; each stage adds exactly one new element.  Reading off the new element
per stage recovers the injective sequence, and both directions preserve the
extension order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .collapse import CountableSet, InjSeq, make_inj_seq, prefix_enumeration
from .errors import NotAQSeq, NotInjective, NotInLambda
from .posets import Code, PosetPresentation


@dataclass(frozen=True)
class QSeq:
    """A finite sequence of finite sets, each adding exactly one new element."""

    stages: tuple  # tuple of frozensets


def validate_qseq(t: Sequence[frozenset]) -> None:
    """Raise unless every stage extends the previous by exactly one element."""
    seen: frozenset = frozenset()
    for i, stage in enumerate(t):
        # one new element and the right size together force stage >= seen
        if len(stage) != len(seen) + 1 or len(stage - seen) != 1:
            if not stage >= seen:
                raise NotAQSeq(f"stage {i} drops earlier elements", stage=i)
            new = len(stage - seen)
            raise NotAQSeq(f"stage {i} adds {new} elements, not 1", stage=i)
        seen = stage
    return None


def coll_to_q(f: InjSeq) -> QSeq:
    """Stage i collects the first i+1 values of the injective sequence."""
    items = f.items
    if len(set(items)) != len(items):
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                if items[i] == items[j]:
                    raise NotInjective(
                        f"positions {i} and {j} repeat {items[i]!r}")
    stages = []
    acc: frozenset = frozenset()
    for v in items:
        acc = acc | {v}
        stages.append(acc)
    return QSeq(tuple(stages))


def q_to_coll(t: QSeq) -> InjSeq:
    """Read off the unique new element of each stage."""
    values = []
    seen: frozenset = frozenset()
    for i, stage in enumerate(t.stages):
        new = stage - seen
        if len(stage) != len(seen) + 1 or len(new) != 1:
            if not stage >= seen:
                raise NotAQSeq(f"stage {i} drops earlier elements", stage=i)
            raise NotAQSeq(f"stage {i} adds {len(new)} elements, not 1",
                           stage=i)
        values.append(next(iter(new)))
        seen = stage
    return InjSeq(tuple(values))


def q_extends(t_longer: QSeq, t_shorter: QSeq) -> bool:
    s, l = t_shorter.stages, t_longer.stages
    return len(l) >= len(s) and l[:len(s)] == s


# ---------------------------------------------------------------------------
# strict lattices with the finite predecessor property
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeOracle:
    """A strict lattice presented by predicates and finite predecessor lists.

    ``lt(p, q)`` reads "p is strictly below q".  ``uppers(p)`` lists every
    element strictly above p and must be finite; ``has_lower`` returns some
    element strictly below its argument, so there are no minimal elements.
    ``meet`` and ``join`` may be partial.  ``enum`` (optional) enumerates
    the carrier so trees over the lattice can present their own carriers.
    """

    name: str
    carrier: Callable[[Code], bool]
    lt: Callable[[Code, Code], bool]
    meet: Callable[[Code, Code], Optional[Code]]
    join: Callable[[Code, Code], Optional[Code]]
    uppers: Callable[[Code], list]
    has_lower: Callable[[Code], Code]
    enum: Optional[Callable[[int], Code]] = None


def check_lattice(l: LatticeOracle, sample: Sequence[Code]) -> None:
    """Spot-check strictness, lattice laws, fpp lists and has_lower on a sample."""
    n = len(sample)
    below = [[l.lt(sample[i], sample[j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        if below[i][i]:
            raise AssertionError(f"lt not irreflexive at {sample[i]!r}")
        for j in range(n):
            if below[i][j]:
                for k in range(n):
                    if below[j][k] and not below[i][k]:
                        raise AssertionError(
                            f"lt not transitive at {sample[i]!r}, {sample[j]!r}, {sample[k]!r}")
    for i in range(n):
        ups = l.uppers(sample[i])
        for j in range(n):
            if below[i][j] != (sample[j] in ups):
                raise AssertionError(
                    f"uppers({sample[i]!r}) disagrees with lt at {sample[j]!r}")
        lower = l.has_lower(sample[i])
        if not l.lt(lower, sample[i]):
            raise AssertionError(f"has_lower({sample[i]!r}) not strictly below")
    for i in range(n):
        for j in range(n):
            m = l.meet(sample[i], sample[j])
            jn = l.join(sample[i], sample[j])
            for k in range(n):
                r = sample[k]
                if l.lt(r, sample[i]) and l.lt(r, sample[j]) and m is not None:
                    if not (r == m or l.lt(r, m)):
                        raise AssertionError(
                            f"meet law fails at {sample[i]!r}, {sample[j]!r}, {r!r}")
                if l.lt(sample[i], r) and l.lt(sample[j], r) and jn is not None:
                    if not (jn == r or l.lt(jn, r)):
                        raise AssertionError(
                            f"join law fails at {sample[i]!r}, {sample[j]!r}, {r!r}")


def lambda_tree(l: LatticeOracle) -> PosetPresentation:
    """The tree of finite strictly decreasing lattice sequences, by extension.

    Every sequence extends through ``has_lower``, so the tree order has no
    minimal elements.  Presentation enumeration requires the lattice to
    carry one.
    """

    def carrier(s: Code) -> bool:
        if not isinstance(s, tuple):
            return False
        if not all(l.carrier(v) for v in s):
            return False
        return all(l.lt(s[j + 1], s[j]) for j in range(len(s) - 1))

    def leq(a: Code, b: Code) -> bool:
        return len(a) >= len(b) and a[:len(b)] == b

    if l.enum is not None:
        lattice_set = CountableSet(l.name, l.enum)
        enum = prefix_enumeration(
            lattice_set,
            lambda prefix, c: l.lt(c, prefix[-1]) if prefix else True)
    else:
        def enum(_n: int) -> Code:
            raise ValueError(f"lattice {l.name} carries no enumeration")

    return PosetPresentation(
        name=f"tree({l.name})", carrier=carrier, leq=leq, enum=enum, root=())


def finite_subset_lattice(x: CountableSet) -> LatticeOracle:
    """Nonempty finite subsets of x under reverse proper inclusion.

    Strictly below means strictly larger as a set, so decreasing sequences
    grow; meet is union, join is intersection where nonempty.  Proper
    nonempty subsets make predecessor lists finite, and adding the next
    fresh code witnesses the absence of minimal elements.
    """

    def carrier(s: Code) -> bool:
        return (isinstance(s, frozenset) and len(s) > 0
                and all(x.contains(v) for v in s))

    def lt(s: Code, t: Code) -> bool:
        return t < s  # proper subset, reversed

    def meet(s: Code, t: Code) -> Code:
        return s | t

    def join(s: Code, t: Code) -> Optional[Code]:
        common = s & t
        return common if common else None

    def uppers(s: Code) -> list:
        out = []
        items = sorted(s, key=x.index_of)
        for mask in range(1, (1 << len(items)) - 1):
            out.append(frozenset(v for i, v in enumerate(items) if mask >> i & 1))
        return out

    def has_lower(s: Code) -> Code:
        i = 0
        while x.enum(i) in s:
            i += 1
        return s | {x.enum(i)}

    def enum(n: int) -> Code:
        mask = n + 1  # skip the empty set
        return frozenset(x.enum(i) for i in range(mask.bit_length()) if mask >> i & 1)

    return LatticeOracle(
        name=f"finite-subsets({x.name})",
        carrier=carrier, lt=lt, meet=meet, join=join,
        uppers=uppers, has_lower=has_lower, enum=enum)


def q_into_lambda(x: CountableSet, t: QSeq) -> tuple:
    """A subset-stage condition, re-checked as a decreasing-sequence tree element.

    Stages grow strictly, which is exactly a strictly decreasing sequence in
    the reverse-inclusion lattice; the embedding is the identity.
    """
    tree = lambda_tree(finite_subset_lattice(x))
    if not tree.carrier(t.stages):
        raise NotInLambda(f"stages {t.stages!r} are not strictly decreasing")
    return t.stages


def qseq_json(x: CountableSet, t: QSeq) -> dict:
    return {"stages": [sorted(stage, key=x.index_of) for stage in t.stages]}
