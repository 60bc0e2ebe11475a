"""Poset presentations, dense sets, the generic-filter engine, and oracles.

Order convention throughout: smaller is stronger, so leq(q, p) reads
"q extends p".  A filter is upward closed and downward directed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional, Sequence

from .errors import BadExtender, NotAChain, OracleLimit

Code = Any


@dataclass(frozen=True)
class PosetPresentation:
    """A poset given by predicates plus an injective enumeration of its carrier."""

    name: str
    carrier: Callable[[Code], bool]
    leq: Callable[[Code, Code], bool]
    enum: Callable[[int], Code]
    root: Optional[Code] = None


@dataclass(frozen=True)
class DenseSet:
    """A dense set with a constructive extender: extend(p) is a member below p."""

    name: str
    member: Callable[[Code], bool]
    extend: Callable[[Code], Code]


@dataclass(frozen=True)
class GenericRun:
    """A finite descending chain together with the dense sets it met.

    ``met`` lists (dense-set index, chain position) pairs; the upward
    closure of the chain is the filter the run denotes.
    """

    poset: str
    chain: tuple
    met: tuple[tuple[int, int], ...]


def rasiowa_sikorski(p: PosetPresentation, ds: Sequence[DenseSet],
                     start: Code, n: int) -> GenericRun:
    """Descend through the first n dense sets of the family, from start.

    chain(0) = start and chain(i+1) = ds[i].extend(chain(i)); each step is
    verified against the extender contract (below the input, and a member).
    """
    if not p.carrier(start):
        raise ValueError(f"start {start!r} is not in the carrier of {p.name}")
    if n > len(ds):
        raise ValueError(f"family has {len(ds)} dense sets, need {n}")
    chain = [start]
    met = []
    for i in range(n):
        q = ds[i].extend(chain[-1])
        if not p.leq(q, chain[-1]):
            raise BadExtender(
                f"extender {ds[i].name} output not below its input", index=i)
        if not ds[i].member(q):
            raise BadExtender(
                f"extender {ds[i].name} output not a member", index=i)
        chain.append(q)
        met.append((i, i + 1))
    return GenericRun(p.name, tuple(chain), tuple(met))


def _check_descending(p: PosetPresentation, chain: Sequence[Code]) -> None:
    for a, b in zip(chain[1:], chain):
        if not p.leq(a, b):
            raise NotAChain(f"{a!r} does not extend {b!r}")


def filter_from_chain(p: PosetPresentation, chain: Sequence[Code],
                      truncation: int) -> set:
    """Upward closure of a descending chain within the first enumerated elements."""
    _check_descending(p, chain)
    closure = set()
    for k in range(truncation):
        q = p.enum(k)
        if any(p.leq(c, q) for c in chain):
            closure.add(q)
    return closure


@dataclass(frozen=True)
class DensityReport:
    """Density evidence on an enumeration fragment; not a proof for the full poset."""

    dense: bool
    fragment: int
    counterexample: Optional[Code] = None


def is_dense_on_truncation(p: PosetPresentation, d: DenseSet,
                           n: int) -> DensityReport:
    """Check that each of the first n elements has an extension in d among the first n."""
    frag = [p.enum(k) for k in range(n)]
    members = [q for q in frag if d.member(q)]
    for q in frag:
        if not any(p.leq(m, q) for m in members):
            return DensityReport(False, n, counterexample=q)
    return DensityReport(True, n)


def run_trace_json(run: GenericRun) -> dict:
    """JSON form of a run: {"poset", "start", "steps": [{"i", "condition", "meets"}]}."""
    by_pos: dict[int, list[int]] = {}
    for idx, pos in run.met:
        by_pos.setdefault(pos, []).append(idx)
    steps = []
    for i, cond in enumerate(run.chain[1:]):
        steps.append({"i": i, "condition": _jsonable(cond),
                      "meets": sorted(by_pos.get(i + 1, []))})
    return {"poset": run.poset, "start": _jsonable(run.chain[0]), "steps": steps}


def _jsonable(code: Code):
    if isinstance(code, tuple):
        return [_jsonable(c) for c in code]
    if isinstance(code, frozenset):
        return sorted(_jsonable(c) for c in code)
    return code


# ---------------------------------------------------------------------------
# finite posets: text format, law checks, brute-force oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinitePoset:
    """A finite poset as an explicit table; leq holds the reflexive closure."""

    elements: tuple
    leq_pairs: frozenset

    def leq(self, a, b) -> bool:
        return a == b or (a, b) in self.leq_pairs


def parse_poset_table(text: str) -> FinitePoset:
    """Parse lines of the form ``elem p`` and ``p <= q``."""
    elements: list = []
    pairs = set()
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("elem "):
            name = line[5:].strip()
            if name in elements:
                raise ValueError(f"duplicate element {name!r}")
            elements.append(name)
        elif "<=" in line:
            a, b = (s.strip() for s in line.split("<=", 1))
            pairs.add((a, b))
        else:
            raise ValueError(f"cannot parse line {raw!r}")
    for a, b in pairs:
        if a not in elements or b not in elements:
            raise ValueError(f"relation {a!r} <= {b!r} uses undeclared elements")
    # reflexive-transitive closure so tables may list only generators
    closed = set(pairs) | {(e, e) for e in elements}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(closed), repeat=2):
            if b == c and (a, d) not in closed:
                closed.add((a, d))
                changed = True
    return FinitePoset(tuple(elements), frozenset(closed))


def format_poset_table(table: FinitePoset) -> str:
    lines = [f"elem {e}" for e in table.elements]
    order = {e: i for i, e in enumerate(table.elements)}
    rels = sorted((a, b) for a, b in table.leq_pairs if a != b)
    lines += [f"{a} <= {b}" for a, b in sorted(rels, key=lambda ab: (order[ab[0]], order[ab[1]]))]
    return "\n".join(lines) + "\n"


def table_poset(table: FinitePoset, name: str = "finite") -> PosetPresentation:
    """Present a finite table as a PosetPresentation."""
    elems = table.elements
    maxima = [p for p in elems if all(table.leq(q, p) for q in elems)]
    return PosetPresentation(
        name=name,
        carrier=lambda c: c in elems,
        leq=table.leq,
        enum=lambda k: elems[k],
        root=maxima[0] if maxima else None,
    )


def check_poset_laws(p: PosetPresentation, n: int) -> None:
    """Assert reflexivity, transitivity and antisymmetry of leq on the first n elements."""
    frag = [p.enum(k) for k in range(n)]
    for q in frag:
        if not p.carrier(q):
            raise AssertionError(f"enumerated {q!r} fails the carrier predicate")
    rows = []
    for a in frag:
        mask = 0
        for j, b in enumerate(frag):
            if p.leq(a, b):
                mask |= 1 << j
        rows.append(mask)
    for i in range(n):
        if not rows[i] >> i & 1:
            raise AssertionError(f"leq not reflexive at {frag[i]!r}")
        m = rows[i]
        j = 0
        while m:
            if m & 1:
                if rows[j] & ~rows[i]:
                    raise AssertionError(
                        f"leq not transitive at {frag[i]!r} <= {frag[j]!r}")
                if rows[j] >> i & 1 and i != j:
                    raise AssertionError(
                        f"leq not antisymmetric on {frag[i]!r}, {frag[j]!r}")
            m >>= 1
            j += 1


_ORACLE_CAP = 20


def is_filter(table: FinitePoset, subset: Iterable) -> bool:
    """Upward closed, downward directed, nonempty."""
    s = set(subset)
    if not s:
        return False
    for p in s:
        for q in table.elements:
            if table.leq(p, q) and q not in s:
                return False
    for p in s:
        for q in s:
            if not any(table.leq(r, p) and table.leq(r, q) for r in s):
                return False
    return True


def brute_force_filter(table: FinitePoset,
                       dense: Sequence[Iterable]) -> Optional[frozenset]:
    """Exhaustively search for a filter meeting every listed set.

    Returns the first such filter in bitmask order over the element list,
    or None when none exists.  Carriers above 20 elements are refused.
    """
    elems = table.elements
    if len(elems) > _ORACLE_CAP:
        raise OracleLimit(f"carrier of size {len(elems)} exceeds {_ORACLE_CAP}")
    targets = [frozenset(d) for d in dense]
    for mask in range(1, 1 << len(elems)):
        s = frozenset(e for i, e in enumerate(elems) if mask >> i & 1)
        if any(not (s & t) for t in targets):
            continue
        if is_filter(table, s):
            return s
    return None


def random_finite_poset(rng, size: int) -> FinitePoset:
    """A random partial order on 0..size-1 (random DAG edges, then closure)."""
    pairs = set()
    for i in range(size):
        for j in range(i + 1, size):
            if rng.random() < 0.4:
                pairs.add((j, i))  # higher index extends lower: j <= i
    closed = set(pairs) | {(i, i) for i in range(size)}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(closed), repeat=2):
            if b == c and (a, d) not in closed:
                closed.add((a, d))
                changed = True
    return FinitePoset(tuple(range(size)), frozenset(closed))


def table_dense_sets(table: FinitePoset, subsets: Sequence[Iterable]) -> list[DenseSet]:
    """Honest DenseSets for subsets known to be dense in the table.

    The extender picks the first listed element below its input that lies
    in the subset.
    """
    out = []
    for i, subset in enumerate(subsets):
        s = frozenset(subset)

        def extend(p, s=s):
            for q in table.elements:
                if table.leq(q, p) and q in s:
                    return q
            raise BadExtender(f"no extension of {p!r} into {sorted(map(str, s))}")

        out.append(DenseSet(f"D{i}", lambda q, s=s: q in s, extend))
    return out


def is_dense_in_table(table: FinitePoset, subset: Iterable) -> bool:
    s = frozenset(subset)
    return all(any(table.leq(q, p) and q in s for q in table.elements)
               for p in table.elements)


def random_dense_sets(rng, table: FinitePoset, count: int) -> list[frozenset]:
    """Random subsets of the table that happen to be dense (rejection sampled)."""
    out = []
    attempts = 0
    while len(out) < count and attempts < 200:
        attempts += 1
        s = frozenset(e for e in table.elements if rng.random() < 0.5)
        if s and is_dense_in_table(table, s):
            out.append(s)
    while len(out) < count:
        out.append(frozenset(table.elements))  # whole carrier is always dense
    return out


# ---------------------------------------------------------------------------
# countable unions of finite pre-orders
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinitePreorder:
    """A finite pre-order level: explicit carrier plus relation table."""

    elements: tuple
    relation: frozenset


@dataclass(frozen=True)
class GammaPresentation:
    """A pre-order presented as a countable union of finite levels.

    Levels are pairwise disjoint unless ``identify`` glues them explicitly.
    """

    name: str
    levels: Callable[[int], FinitePreorder]
    identify: Optional[Callable[[Code], Code]] = None


@dataclass(frozen=True)
class PreorderViolation:
    level: int
    law: str
    witness: tuple


@dataclass(frozen=True)
class GammaReport:
    ok: bool
    size_profile: tuple[int, ...]
    violation: Optional[PreorderViolation] = None


def gamma_check(g: GammaPresentation, depth: int) -> GammaReport:
    """Verify the first ``depth`` levels are finite pre-orders; report sizes.

    A failing level is reported as not-a-preorder with a witness triple
    (for reflexivity failures the witness repeats the offending element).
    """
    sizes = []
    seen: set = set()
    for lv in range(depth):
        level = g.levels(lv)
        elems = level.elements
        rel = level.relation
        sizes.append(len(elems))
        for x in elems:
            if (x, x) not in rel:
                return GammaReport(False, tuple(sizes),
                                   PreorderViolation(lv, "not-a-preorder", (x, x, x)))
        for (a, b) in rel:
            for (c, d) in rel:
                if b == c and (a, d) not in rel:
                    return GammaReport(False, tuple(sizes),
                                       PreorderViolation(lv, "not-a-preorder", (a, b, d)))
        if g.identify is None:
            overlap = seen & set(elems)
            if overlap:
                x = sorted(map(str, overlap))[0]
                return GammaReport(False, tuple(sizes),
                                   PreorderViolation(lv, "levels-overlap", (x, x, x)))
            seen |= set(elems)
    return GammaReport(True, tuple(sizes))
