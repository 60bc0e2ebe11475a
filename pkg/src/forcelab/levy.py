"""Lifting dependent choice through a singular limit.

A witness of limit length is assembled block by block along a cofinal
ladder: block xi has the order type of the ladder interval and is produced
by a block builder from the concatenated earlier blocks.  Freshness over an
infinite prefix is decided structurally: the construction records which
enumeration indices each block consumes, finite blocks as explicit index
sets and infinite blocks as an "every other fresh index" layer, which keeps
infinitely many indices free for later blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

from .collapse import CountableSet
from .errors import (
    BadBlock,
    BadBlockWitness,
    BadCofinal,
    OutOfDomain,
    RangeNotDecidable,
)
from .ordinals import (
    OMEGA,
    ZERO,
    Ordinal,
    TransfiniteSeq,
    concat,
    ord_add,
    ord_of,
    ord_sub_left,
)

# ---------------------------------------------------------------------------
# structural bookkeeping of consumed enumeration indices
# ---------------------------------------------------------------------------


class OmegaLayer:
    """The even-ranked fresh indices over a base usage: an infinite block's
    consumption that still leaves infinitely many indices free.

    The scan of the base is incremental and memoized, so nested layers stay
    usable; identity-based equality is fine because layers are bookkeeping.
    """

    def __init__(self, base: "IndexUsage"):
        self.base = base
        self._fresh: list[int] = []   # base-fresh indices in increasing order
        self._rank: dict[int, int] = {}
        self._scanned = 0

    def _scan_to(self, k: int) -> None:
        while self._scanned <= k:
            i = self._scanned
            if not self.base.contains(i):
                self._rank[i] = len(self._fresh)
                self._fresh.append(i)
            self._scanned += 1

    def contains(self, k: int) -> bool:
        self._scan_to(k)
        rank = self._rank.get(k)
        return rank is not None and rank % 2 == 0

    def nth_index(self, j: int) -> int:
        """Enumeration index of the layer's j-th element (the 2j-th fresh)."""
        while len(self._fresh) <= 2 * j:
            self._scan_to(self._scanned)
        return self._fresh[2 * j]


@dataclass(frozen=True)
class IndexUsage:
    """A decidable set of consumed enumeration indices."""

    explicit: frozenset = frozenset()
    layers: tuple = ()

    def contains(self, k: int) -> bool:
        return k in self.explicit or any(l.contains(k) for l in self.layers)

    def least_fresh(self) -> int:
        i = 0
        while self.contains(i):
            i += 1
        return i

    def with_explicit(self, indices) -> "IndexUsage":
        return IndexUsage(self.explicit | frozenset(indices), self.layers)

    def with_layer(self, layer: OmegaLayer) -> "IndexUsage":
        return IndexUsage(self.explicit, self.layers + (layer,))


@dataclass(frozen=True)
class UsageSeq(TransfiniteSeq):
    """A transfinite sequence that knows which enumeration indices it uses."""

    usage: IndexUsage = IndexUsage()


# ---------------------------------------------------------------------------
# functionals on transfinite sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransfiniteFunctional:
    """A choice oracle on transfinite sequences: membership plus a select witness."""

    name: str
    member: Callable[[Any, Any], bool]
    select: Callable[[Any], Any]
    set: Optional[CountableSet] = None


def transfinite_f_seq(x: CountableSet) -> TransfiniteFunctional:
    """Allows exactly the codes not in the range of the argument sequence.

    Range membership over an infinite sequence is decided through the
    sequence's usage record; finite sequences are simply scanned.
    """

    def member(seq, v) -> bool:
        usage = getattr(seq, "usage", None)
        if usage is not None:
            try:
                idx = x.index_of(v)
            except ValueError:
                return False
            return not usage.contains(idx)
        if seq.length.is_finite():
            vals = [seq.at(i) for i in range(seq.length.to_int())]
            return x.contains(v) and not any(x.eq(v, c) for c in vals)
        raise RangeNotDecidable(
            f"sequence of length {seq.length} carries no usage record")

    def select(seq):
        usage = getattr(seq, "usage", None)
        if usage is not None:
            return x.enum(usage.least_fresh())
        if seq.length.is_finite():
            vals = [seq.at(i) for i in range(seq.length.to_int())]
            i = 0
            while any(x.eq(x.enum(i), c) for c in vals):
                i += 1
            return x.enum(i)
        raise RangeNotDecidable(
            f"sequence of length {seq.length} carries no usage record")

    return TransfiniteFunctional(f"seq({x.name})", member, select, set=x)


# ---------------------------------------------------------------------------
# cofinal ladders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CofinalPresentation:
    """An increasing ladder of length w starting at 0 with supremum alpha."""

    alpha: Ordinal
    stages: TransfiniteSeq

    def stage(self, xi: int) -> Ordinal:
        return self.stages.at(xi)

    def gamma(self, xi: int) -> Ordinal:
        """Order type of the interval [stage(xi), stage(xi+1))."""
        return ord_sub_left(self.stage(xi), self.stage(xi + 1))


def standard_cofinal(alpha: Ordinal) -> CofinalPresentation:
    """The canonical ladder: limit boundaries first, then single steps.

    Supports the limits whose ladders need only finite and w-length blocks:
    alpha = w*k walks 0, w, ..., w*(k-1) and then counts on, and
    alpha = w^2 walks the multiples of w.
    """
    if not alpha.is_limit():
        raise BadCofinal(f"{alpha} is not a limit ordinal")
    if alpha.terms == ((2, 1),):
        return CofinalPresentation(
            alpha, TransfiniteSeq(OMEGA, lambda xi: Ordinal.omega(xi.to_int())
                                  if xi.to_int() else ZERO))
    if len(alpha.terms) == 1 and alpha.terms[0][0] == 1:
        k = alpha.terms[0][1]

        def stage(xi: Ordinal) -> Ordinal:
            n = xi.to_int()
            if n < k:
                return Ordinal.omega(n) if n else ZERO
            return ord_add(Ordinal.omega(k - 1) if k > 1 else ZERO,
                           Ordinal.from_int(n - (k - 1)))

        return CofinalPresentation(alpha, TransfiniteSeq(OMEGA, stage))
    raise BadCofinal(
        f"no ladder with finite-or-w blocks reaches {alpha}")


def validate_cofinal(cof: CofinalPresentation, probe: int = 50) -> None:
    """Check ladder invariants on the first ``probe`` stages."""
    if cof.stages.length != OMEGA:
        raise BadCofinal("ladder must have length w")
    if not cof.stage(0).is_zero():
        raise BadCofinal("ladder must start at 0")
    prev = cof.stage(0)
    for xi in range(1, probe + 1):
        cur = cof.stage(xi)
        if not prev < cur:
            raise BadCofinal(f"ladder not strictly increasing at {xi}")
        if not cur < cof.alpha:
            raise BadCofinal(f"stage {xi} reaches {cof.alpha}")
        gamma = ord_sub_left(prev, cur)
        if not (gamma.is_finite() or gamma == OMEGA):
            raise BadCofinal(f"block {xi - 1} has length {gamma}, not finite or w")
        prev = cur


# ---------------------------------------------------------------------------
# block builders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BuiltBlock:
    """A block plus the bookkeeping to restrict or extend its usage."""

    seq: TransfiniteSeq
    usage_after: IndexUsage          # usage of prefix + this whole block
    indices: Optional[tuple] = None  # finite block: consumed indices in order
    layer: Optional[OmegaLayer] = None

    def partial_usage(self, offset: int, base: IndexUsage) -> IndexUsage:
        if self.indices is not None:
            return base.with_explicit(self.indices[:offset])
        return base.with_explicit(self.layer.nth_index(j) for j in range(offset))


def standard_block_builder(x: CountableSet) -> Callable:
    """Block builder for freshness functionals over x.

    Finite blocks iterate the functional's select greedily.  Blocks of
    length w instead take every other fresh index: a greedy infinite block
    would exhaust a countable presentation and leave nothing for the later
    blocks, while the alternating choice is still a block of allowed values.
    """

    def build(gamma: Ordinal, f: TransfiniteFunctional,
              prefix: TransfiniteSeq) -> BuiltBlock:
        usage = getattr(prefix, "usage", None)
        if usage is None:
            raise RangeNotDecidable(
                "standard builder needs a prefix with a usage record")
        if gamma.is_finite():
            values = []
            indices = []
            cur = usage
            for j in range(gamma.to_int()):
                working = UsageSeq(ord_add(prefix.length, Ordinal.from_int(j)),
                                   _splice(prefix, values), usage=cur)
                v = f.select(working)
                values.append(v)
                idx = x.index_of(v)
                indices.append(idx)
                cur = cur.with_explicit((idx,))
            seq = TransfiniteSeq.from_items(values)
            return BuiltBlock(seq, cur, indices=tuple(indices))
        if gamma == OMEGA:
            layer = OmegaLayer(usage)
            seq = TransfiniteSeq(OMEGA, lambda j: x.enum(layer.nth_index(j.to_int())))
            return BuiltBlock(seq, usage.with_layer(layer), layer=layer)
        raise BadBlock(f"block length {gamma} unsupported (finite or w only)")

    return build


def _splice(prefix: TransfiniteSeq, values: list) -> Callable:
    plen = prefix.length

    def evaluator(pos: Ordinal):
        if pos < plen:
            return prefix.at(pos)
        return values[ord_sub_left(plen, pos).to_int()]

    return evaluator


_OMEGA_BLOCK_PROBES = (0, 1, 2, 5, 13)
_FINITE_CHECK_CAP = 64
_LOCATE_CAP = 1_000_000


# ---------------------------------------------------------------------------
# the lifted witness
# ---------------------------------------------------------------------------


class LiftedWitness:
    """A length-alpha sequence built block by block along a cofinal ladder.

    Blocks are constructed lazily but strictly in order; every finished
    block is verified to have the ladder's order type and to satisfy the
    functional at sampled positions.  Restrictions carry the usage record
    of exactly the consumed prefix.
    """

    def __init__(self, cof: CofinalPresentation, f: TransfiniteFunctional,
                 builder: Callable):
        self.cof = cof
        self.functional = f
        self.builder = builder
        self.length = cof.alpha
        self._blocks: list[BuiltBlock] = []
        self._concat: Optional[TransfiniteSeq] = None

    def _concat_seq(self) -> TransfiniteSeq:
        if self._concat is None:
            self._concat = concat(
                TransfiniteSeq(OMEGA, lambda xi: self._block(xi.to_int()).seq),
                limit_length=self.cof.alpha)
        return self._concat

    # -- block construction -------------------------------------------

    def _usage_before(self, xi: int) -> IndexUsage:
        return self._blocks[xi - 1].usage_after if xi else IndexUsage()

    def _prefix(self, xi: int) -> UsageSeq:
        return UsageSeq(self.cof.stage(xi), self._eval_at,
                        usage=self._usage_before(xi))

    def _block(self, xi: int) -> BuiltBlock:
        while len(self._blocks) <= xi:
            nxt = len(self._blocks)
            gamma = self.cof.gamma(nxt)
            prefix = self._prefix(nxt)
            block = self.builder(gamma, self.functional, prefix)
            if not isinstance(block, BuiltBlock):
                raise BadBlock("builder must return a BuiltBlock")
            if block.seq.length != gamma:
                raise BadBlock(
                    f"block {nxt} has length {block.seq.length}, expected {gamma}")
            self._blocks.append(block)
            self._verify_block(nxt, block, prefix)
        return self._blocks[xi]

    def _verify_block(self, xi: int, block: BuiltBlock,
                      prefix: UsageSeq) -> None:
        gamma = block.seq.length
        if gamma.is_finite():
            probes = range(min(gamma.to_int(), _FINITE_CHECK_CAP))
        else:
            probes = _OMEGA_BLOCK_PROBES
        for j in probes:
            working = UsageSeq(ord_add(prefix.length, Ordinal.from_int(j)),
                               self._eval_at,
                               usage=block.partial_usage(j, prefix.usage))
            if not self.functional.member(working, block.seq.at(j)):
                raise BadBlockWitness(
                    f"block {xi} value at offset {j} is not allowed",
                    position=str(ord_add(prefix.length, Ordinal.from_int(j))))

    # -- sequence interface ---------------------------------------------

    def _eval_at(self, pos: Ordinal):
        xi, offset = self.locate(pos)
        return self._block(xi).seq.at(offset)

    def at(self, pos) -> Any:
        p = ord_of(pos)
        if not p < self.length:
            raise IndexError(f"position {p} not below {self.length}")
        return self._concat_seq().at(p)

    def locate(self, pos) -> tuple[int, Ordinal]:
        """Block index and offset of a position."""
        p = ord_of(pos)
        if not p < self.length:
            raise IndexError(f"position {p} not below {self.length}")
        xi = 0
        while not p < self.cof.stage(xi + 1):
            xi += 1
            if xi > _LOCATE_CAP:
                raise BadCofinal(f"ladder never passes {p}")
        return xi, ord_sub_left(self.cof.stage(xi), p)

    def usage_at(self, pos) -> IndexUsage:
        """Usage record of the restriction to positions below pos."""
        xi, offset = self.locate(pos)
        self._block(xi)
        return self._blocks[xi].partial_usage(offset.to_int(),
                                              self._usage_before(xi))

    def restrict(self, length) -> UsageSeq:
        l = ord_of(length)
        if self.length < l:
            raise IndexError(f"cannot restrict length {self.length} to {l}")
        if l == self.length:
            raise RangeNotDecidable(
                "the full witness has no single usage record; restrict below a stage")
        return UsageSeq(l, self._eval_at, usage=self.usage_at(l))

    def block_lengths(self, upto: int) -> list[Ordinal]:
        return [self._block(xi).seq.length for xi in range(upto)]


def levy_lift(cof: CofinalPresentation, f: TransfiniteFunctional,
              builder: Optional[Callable] = None) -> LiftedWitness:
    """Assemble a witness of length alpha from block witnesses on the ladder.

    Block xi is builder(gamma_xi, f, concatenation of the earlier blocks);
    the result evaluates anywhere below alpha and satisfies the functional
    at every position the verifier samples.
    """
    validate_cofinal(cof)
    if builder is None:
        if f.set is None:
            raise ValueError(
                f"{f.name} names no countable set; pass a builder explicitly")
        builder = standard_block_builder(f.set)
    return LiftedWitness(cof, f, builder)


def check_transfinite_witness(f: TransfiniteFunctional, g,
                              samples: Sequence) -> bool:
    """True iff g(beta) is allowed by f after g's restriction, at every sample."""
    for beta in samples:
        b = ord_of(beta)
        if not b < g.length:
            raise OutOfDomain(f"sample {b} not below length {g.length}")
        if not f.member(g.restrict(b), g.at(b)):
            return False
    return True


def default_samples(cof: CofinalPresentation) -> list[Ordinal]:
    """0, a mid-block point, the first five ladder boundaries, and the two
    least limit ordinals below alpha when they exist."""
    samples = {ZERO}
    gamma0 = cof.gamma(0)
    if gamma0 == OMEGA:
        samples.add(Ordinal.from_int(3))
    elif gamma0.to_int() >= 2:
        samples.add(Ordinal.from_int(gamma0.to_int() // 2))
    for xi in range(1, 6):
        stage = cof.stage(xi)
        if stage < cof.alpha:
            samples.add(stage)
    for k in (1, 2):
        limit = Ordinal.omega(k)
        if limit < cof.alpha:
            samples.add(limit)
    return sorted(samples)


def sample_report(f: TransfiniteFunctional, g,
                  samples: Sequence) -> list[dict]:
    out = []
    for beta in samples:
        b = ord_of(beta)
        if not b < g.length:
            raise OutOfDomain(f"sample {b} not below length {g.length}")
        ok = f.member(g.restrict(b), g.at(b))
        out.append({"beta": str(b), "ok": bool(ok)})
    return out


def run_report_json(cof: CofinalPresentation, f: TransfiniteFunctional,
                    g: LiftedWitness, blocks: int,
                    samples: Sequence) -> dict:
    return {
        "alpha": str(cof.alpha),
        "blocks": [{"xi": xi, "gamma": str(cof.gamma(xi))} for xi in range(blocks)],
        "samples": sample_report(f, g, samples),
    }
