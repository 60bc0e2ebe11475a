"""The poset of finite injective sequences over a countable set.

Conditions are injective tuples ordered by end-extension (longer is
stronger); the union of a generic chain is an injection.  Also home to the
generic prefix-tree enumeration used by every sequence-tree poset here.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

from .errors import NotAChain, NotInjective
from .ordinals import cantor_pair, cantor_unpair
from .posets import Code, DenseSet, GenericRun, PosetPresentation

_INDEX_SCAN_CAP = 100_000


@dataclass(frozen=True)
class CountableSet:
    """An infinite set presented by an injective enumeration of element codes.

    ``index`` inverts ``enum`` where available; otherwise membership falls
    back to a bounded scan of the enumeration.
    """

    name: str
    enum: Callable[[int], Code]
    eq: Callable[[Code, Code], bool] = operator.eq
    index: Optional[Callable[[Code], Optional[int]]] = None

    def index_of(self, code: Code) -> int:
        if self.index is not None:
            i = self.index(code)
            if i is None:
                raise ValueError(f"{code!r} is not in {self.name}")
            return i
        for i in range(_INDEX_SCAN_CAP):
            if self.eq(self.enum(i), code):
                return i
        raise ValueError(
            f"{code!r} not found in the first {_INDEX_SCAN_CAP} codes of {self.name}")

    def contains(self, code: Code) -> bool:
        try:
            self.index_of(code)
            return True
        except ValueError:
            return False


def nat_set() -> CountableSet:
    return CountableSet(
        "nat", lambda n: n,
        index=lambda v: v if isinstance(v, int) and v >= 0 else None)


def evens_set() -> CountableSet:
    return CountableSet(
        "evens", lambda n: 2 * n,
        index=lambda v: v // 2 if isinstance(v, int) and v >= 0 and v % 2 == 0 else None)


def pairs_set() -> CountableSet:
    def index(v):
        if (isinstance(v, tuple) and len(v) == 2
                and all(isinstance(c, int) and c >= 0 for c in v)):
            return cantor_pair(*v)
        return None

    return CountableSet("pairs", cantor_unpair, index=index)


_BUILTINS = {"nat": nat_set, "evens": evens_set, "pairs": pairs_set}


def builtin_set(name: str) -> CountableSet:
    if name not in _BUILTINS:
        raise KeyError(f"unknown set {name!r}; have {sorted(_BUILTINS)}")
    return _BUILTINS[name]()


@dataclass(frozen=True)
class InjSeq:
    """A finite injective sequence of element codes."""

    items: tuple


def make_inj_seq(x: CountableSet, items: Sequence[Code]) -> InjSeq:
    items = tuple(items)
    _require_injective(x, items)
    return InjSeq(items)


def _require_injective(x: CountableSet, items: Sequence[Code]) -> None:
    if x.eq is operator.eq and len(set(items)) == len(items):
        return
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if x.eq(items[i], items[j]):
                raise NotInjective(
                    f"positions {i} and {j} repeat {items[i]!r}")


def inj_seq_json(x: CountableSet, s: InjSeq) -> dict:
    from .posets import _jsonable
    return {"set": x.name, "items": [_jsonable(c) for c in s.items]}


# ---------------------------------------------------------------------------
# prefix-tree enumeration
# ---------------------------------------------------------------------------

_ENUM_DEPTH_CAP = 1000


def prefix_enumeration(x: CountableSet,
                       extends_ok: Callable[[tuple, Code], bool]) -> Callable[[int], tuple]:
    """Injective enumeration of a prefix-closed family of injective tuples.

    ``extends_ok(prefix, code)`` decides whether prefix + (code,) stays in
    the family.  Tuples are listed in blocks: block k holds the valid
    tuples over the first k codes that use code k-1, ordered by length then
    by index-lexicographic order.  Prefix-closure makes pruning sound.
    """
    items: list[tuple] = [()]
    valid_cache: dict[int, list[tuple[int, ...]]] = {0: [()]}

    def valid_upto(k: int) -> list[tuple[int, ...]]:
        if k not in valid_cache:
            codes = [x.enum(i) for i in range(k)]
            found: list[tuple[int, ...]] = []

            def dfs(prefix_idx: tuple[int, ...], prefix_codes: tuple):
                found.append(prefix_idx)
                for i in range(k):
                    if i in prefix_idx:
                        continue
                    if extends_ok(prefix_codes, codes[i]):
                        dfs(prefix_idx + (i,), prefix_codes + (codes[i],))

            dfs((), ())
            found.sort(key=lambda t: (len(t), t))
            valid_cache[k] = found
        return valid_cache[k]

    def enum(n: int) -> tuple:
        k = max(valid_cache)
        while len(items) <= n:
            k += 1
            if k > _ENUM_DEPTH_CAP:
                raise RuntimeError(
                    f"enumeration needs more than {_ENUM_DEPTH_CAP} codes; "
                    "carrier may be finite")
            prev = set(valid_upto(k - 1))
            codes = [x.enum(i) for i in range(k)]
            for t in valid_upto(k):
                if t not in prev:
                    items.append(tuple(codes[i] for i in t))
        return items[n]

    return enum


# ---------------------------------------------------------------------------
# the collapse poset and its dense levels
# ---------------------------------------------------------------------------

def coll_poset(x: CountableSet) -> PosetPresentation:
    """Finite injective sequences over x, ordered by end-extension."""

    def carrier(t: Code) -> bool:
        if not isinstance(t, tuple):
            return False
        for i, c in enumerate(t):
            if not x.contains(c):
                return False
            for d in t[i + 1:]:
                if x.eq(c, d):
                    return False
        return True

    def leq(g: Code, f: Code) -> bool:
        if len(g) < len(f):
            return False
        return all(x.eq(g[i], f[i]) for i in range(len(f)))

    return PosetPresentation(
        name=f"Coll(w,{x.name})",
        carrier=carrier,
        leq=leq,
        enum=prefix_enumeration(x, lambda prefix, c: c not in prefix),
        root=(),
    )


def fresh_bound(x: CountableSet, p: tuple) -> int:
    """Least b such that every code of p lies among the first b enumerated."""
    return max((x.index_of(c) for c in p), default=-1) + 1


def level_dense(x: CountableSet, i: int) -> DenseSet:
    """The dense level of conditions of length at least i.

    The extender appends the block of i enumeration codes starting at the
    least bound covering the condition's range; the output is injective,
    extends the input, and lands in the level.
    """

    def extend(p: tuple) -> tuple:
        b = fresh_bound(x, p)
        return p + tuple(x.enum(b + j) for j in range(i))

    return DenseSet(f"L_{i}", lambda f: len(f) >= i, extend)


def level_family(x: CountableSet, n: int) -> list[DenseSet]:
    """Engine family of n dense goals; meeting the first m forces length >= m.

    The i-th goal is the level of conditions longer than i, with the
    economical extender that appends only the missing number of fresh
    codes, so a run through n goals grows linearly.
    """
    out = []
    for i in range(n):
        target = i + 1

        def extend(p: tuple, target=target) -> tuple:
            need = target - len(p)
            if need <= 0:
                return p
            b = fresh_bound(x, p)
            return p + tuple(x.enum(b + j) for j in range(need))

        out.append(DenseSet(f"len>={target}", lambda f, target=target: len(f) >= target,
                            extend))
    return out


def generic_to_injection(x: CountableSet, run: GenericRun) -> InjSeq:
    """The union of a descending chain of conditions, as an injective sequence."""
    chain = run.chain
    for a, b in zip(chain[1:], chain):
        if len(a) < len(b) or any(not x.eq(a[i], b[i]) for i in range(len(b))):
            raise NotAChain(f"{a!r} does not extend {b!r}")
    return make_inj_seq(x, chain[-1] if chain else ())


def injection_to_generic(x: CountableSet,
                         g: "Callable[[int], Code] | Sequence[Code]",
                         n: int) -> GenericRun:
    """The run of initial restrictions of an injection, meeting level i at position i."""
    values = [g(i) for i in range(n)] if callable(g) else list(g[:n])
    _require_injective(x, values)
    chain = tuple(tuple(values[:i]) for i in range(n + 1))
    met = tuple((i, i) for i in range(n + 1))
    return GenericRun(f"Coll(w,{x.name})", chain, met)
