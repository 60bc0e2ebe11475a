"""Ordinal arithmetic in Cantor normal form below w^w.

Ordinals are finite sums  w^e1*c1 + ... + w^ek*ck  with natural exponents
strictly decreasing and positive natural coefficients.  This class is closed
under addition, so overflow past w^w cannot arise from the operations here.
Also provides transfinite sequences indexed by such ordinals, their
(possibly infinite) concatenation, and a canonical bijection between an
infinite ordinal below w^w and the naturals.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Iterator

from .errors import (
    EmptyComponent,
    MissingLimitLength,
    NoOmegaBijection,
    OrdinalOverflow,
    SsupOfEmpty,
)


@functools.total_ordering
@dataclass(frozen=True)
class Ordinal:
    """An ordinal below w^w in Cantor normal form.

    ``terms`` is a tuple of (exponent, coefficient) pairs with exponents
    strictly decreasing and coefficients positive; the empty tuple is 0.
    Tuple comparison of ``terms`` is exactly the ordinal order.
    """

    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        prev = None
        for e, c in self.terms:
            if not (isinstance(e, int) and e >= 0):
                raise ValueError(f"bad exponent {e!r}")
            if not (isinstance(c, int) and c >= 1):
                raise ValueError(f"bad coefficient {c!r}")
            if prev is not None and e >= prev:
                raise ValueError("exponents must be strictly decreasing")
            prev = e

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Ordinal":
        return Ordinal(())

    @staticmethod
    def from_int(n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinals are non-negative")
        return Ordinal(((0, n),) if n else ())

    @staticmethod
    def omega(coeff: int = 1) -> "Ordinal":
        return Ordinal(((1, coeff),))

    @staticmethod
    def omega_power(exp: int, coeff: int = 1) -> "Ordinal":
        return Ordinal(((exp, coeff),) if coeff else ())

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or self.terms[0][0] == 0

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] == 0

    def is_limit(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] >= 1

    def to_int(self) -> int:
        if not self.is_finite():
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    # -- order ----------------------------------------------------------

    def __lt__(self, other: "Ordinal") -> bool:
        return self.terms < other.terms

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "Ordinal") -> "Ordinal":
        return ord_add(self, other)

    def succ(self) -> "Ordinal":
        return ord_add(self, ONE)

    def pred(self) -> "Ordinal":
        if not self.is_successor():
            raise ValueError(f"{self} is not a successor")
        e, c = self.terms[-1]
        head = self.terms[:-1]
        return Ordinal(head + ((0, c - 1),) if c > 1 else head)

    # -- text format -----------------------------------------------------

    def __str__(self) -> str:
        return format_cnf(self)

    def __repr__(self) -> str:
        return f"Ordinal({format_cnf(self)!r})"


ZERO = Ordinal.zero()
ONE = Ordinal.from_int(1)
OMEGA = Ordinal.omega()


def ord_of(x: "Ordinal | int") -> Ordinal:
    """Coerce a non-negative int to an Ordinal; pass Ordinals through."""
    if isinstance(x, Ordinal):
        return x
    return Ordinal.from_int(x)


def ord_add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Standard non-commutative ordinal addition on CNF."""
    if not b.terms:
        return a
    e = b.terms[0][0]
    kept = [t for t in a.terms if t[0] > e]
    merged = list(b.terms)
    for t in a.terms:
        if t[0] == e:
            merged[0] = (e, t[1] + b.terms[0][1])
            break
    return Ordinal(tuple(kept) + tuple(merged))


def ord_sub_left(a: Ordinal, b: Ordinal) -> Ordinal:
    """The unique o with a + o = b, for a <= b (order type of [a, b))."""
    if b < a:
        raise ValueError(f"cannot left-subtract {a} from smaller {b}")
    at, bt = a.terms, b.terms
    k = 0
    while k < len(at) and k < len(bt) and at[k] == bt[k]:
        k += 1
    if k == len(at):
        return Ordinal(bt[k:])
    # first differing term: b must dominate there
    e_a, c_a = at[k]
    e_b, c_b = bt[k]
    if e_b > e_a:
        return Ordinal(bt[k:])
    # e_b == e_a with c_b > c_a (anything else contradicts a <= b)
    return Ordinal(((e_a, c_b - c_a),) + bt[k + 1:])


def format_cnf(a: Ordinal) -> str:
    """Render as e.g. ``"w^2*3 + w*1 + 4"``; zero is ``"0"``."""
    if not a.terms:
        return "0"
    parts = []
    for e, c in a.terms:
        if e == 0:
            parts.append(str(c))
        elif e == 1:
            parts.append(f"w*{c}")
        else:
            parts.append(f"w^{e}*{c}")
    return " + ".join(parts)


def parse_cnf(text: str) -> Ordinal:
    """Parse the ``format_cnf`` notation back into an Ordinal."""
    s = text.strip()
    if s == "0":
        return ZERO
    terms = []
    for part in s.split("+"):
        part = part.strip()
        if not part:
            raise ValueError(f"empty term in {text!r}")
        if part.startswith("w"):
            rest = part[1:]
            exp = 1
            if rest.startswith("^"):
                rest = rest[1:]
                cut = rest.find("*")
                exp_text = rest if cut < 0 else rest[:cut]
                exp = int(exp_text)
                rest = "" if cut < 0 else rest[cut:]
            if rest.startswith("*"):
                coeff = int(rest[1:])
            elif rest == "":
                coeff = 1
            else:
                raise ValueError(f"cannot parse term {part!r}")
            terms.append((exp, coeff))
        else:
            terms.append((0, int(part)))
    return Ordinal(tuple(terms))


# ---------------------------------------------------------------------------
# strong suprema
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrdinalsBelow:
    """The set {o : o < bound}, a lazily enumerable set of ordinals.

    Stands in for infinite inputs to ``ssup``: the set is presented by its
    bound rather than by an (impossible) exhaustive listing.
    """

    bound: Ordinal

    def __iter__(self) -> Iterator[Ordinal]:
        # finite bounds enumerate exactly; infinite ones yield 0, 1, 2, ...
        n = ZERO
        while n < self.bound:
            yield n
            n = n.succ()


def ssup(ys: "Iterable[Ordinal] | OrdinalsBelow") -> Ordinal:
    """Least ordinal strictly greater than every element of ys.

    A set with a maximum yields max + 1; a set without one yields its
    supremum.  Finite collections always have a maximum; the no-maximum case
    is reached through an ``OrdinalsBelow`` presentation with a limit bound.
    """
    if isinstance(ys, OrdinalsBelow):
        if ys.bound.is_zero():
            raise SsupOfEmpty("ssup of the empty set is undefined")
        return ys.bound
    items = [ord_of(y) for y in ys]
    if not items:
        raise SsupOfEmpty("ssup of the empty set is undefined")
    return max(items).succ()


# ---------------------------------------------------------------------------
# transfinite sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransfiniteSeq:
    """A sequence indexed by ordinals below ``length``.

    ``evaluator`` must be pure and defined on every position below
    ``length``; positions are bounds-checked here.
    """

    length: Ordinal
    evaluator: Callable[[Ordinal], Any]

    def at(self, pos: "Ordinal | int") -> Any:
        p = ord_of(pos)
        if not p < self.length:
            raise IndexError(f"position {p} not below length {self.length}")
        return self.evaluator(p)

    def restrict(self, length: "Ordinal | int") -> "TransfiniteSeq":
        l = ord_of(length)
        if self.length < l:
            raise IndexError(f"cannot restrict length {self.length} to {l}")
        return TransfiniteSeq(l, self.evaluator)

    def materialize(self) -> list:
        """List of all items; only for finite lengths."""
        n = self.length.to_int()
        return [self.at(i) for i in range(n)]

    @staticmethod
    def from_items(items: Iterable[Any]) -> "TransfiniteSeq":
        data = tuple(items)
        return TransfiniteSeq(Ordinal.from_int(len(data)),
                              lambda p: data[p.to_int()])


def constant_seq(length: "Ordinal | int", item: Any) -> TransfiniteSeq:
    return TransfiniteSeq(ord_of(length), lambda _p: item)


def _sigma_offsets(t: TransfiniteSeq, upto: int) -> list[Ordinal]:
    """First offsets of the concatenation: sigma_0 = 0, sigma_{i+1} = sigma_i + len(t_i)."""
    sigmas = [ZERO]
    for i in range(upto):
        comp = t.at(i)
        if comp.length.is_zero():
            raise EmptyComponent(f"component {i} has length 0")
        sigmas.append(ord_add(sigmas[-1], comp.length))
    return sigmas


_PROBE_BLOCKS = 8
_SCAN_CAP = 1_000_000


def concat(t: TransfiniteSeq, limit_length: "Ordinal | None" = None) -> TransfiniteSeq:
    """Concatenate a sequence of nonempty sequences into one sequence.

    Component i occupies positions [sigma_i, sigma_{i+1}) where sigma_0 = 0
    and sigma_{i+1} = sigma_i + length(t_i); the result has length equal to
    the supremum of the sigma sequence.  For a finite outer sequence that
    supremum is computed outright.  For an outer sequence of length w it is
    not finitely computable from the evaluator, so the caller must declare
    it via ``limit_length``; the declaration is checked for consistency
    against the first blocks.
    """
    tau = t.length
    if tau.is_finite():
        n = tau.to_int()
        sigmas = _sigma_offsets(t, n)
        total = sigmas[-1]
        if limit_length is not None and limit_length != total:
            raise OrdinalOverflow(
                f"declared length {limit_length} but components sum to {total}")
        components = [t.at(i) for i in range(n)]

        def eval_finite(pos: Ordinal) -> Any:
            lo, hi = 0, n - 1
            # sigma is strictly increasing: binary search for the block
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if sigmas[mid] <= pos:
                    lo = mid
                else:
                    hi = mid - 1
            return components[lo].at(ord_sub_left(sigmas[lo], pos))

        return TransfiniteSeq(total, eval_finite)

    if tau != OMEGA:
        raise OrdinalOverflow(
            f"outer length {tau} unsupported (finite or w only)")
    if limit_length is None:
        raise MissingLimitLength(
            "infinite concatenation needs a declared total length")
    if not limit_length.is_limit():
        raise OrdinalOverflow(
            f"declared length {limit_length} of an infinite concatenation must be a limit")

    sigma_cache = _sigma_offsets(t, _PROBE_BLOCKS)
    for s in sigma_cache[1:]:
        if not s < limit_length:
            raise OrdinalOverflow(
                f"block offset {s} reaches declared length {limit_length}")

    def eval_infinite(pos: Ordinal) -> Any:
        i = 0
        while True:
            if i + 1 >= len(sigma_cache):
                comp = t.at(i)
                if comp.length.is_zero():
                    raise EmptyComponent(f"component {i} has length 0")
                sigma_cache.append(ord_add(sigma_cache[-1], comp.length))
            if pos < sigma_cache[i + 1]:
                return t.at(i).at(ord_sub_left(sigma_cache[i], pos))
            i += 1
            if i > _SCAN_CAP:
                raise OrdinalOverflow(
                    f"position {pos} not reached after {_SCAN_CAP} blocks")

    return TransfiniteSeq(limit_length, eval_infinite)


# ---------------------------------------------------------------------------
# bijection with the naturals
# ---------------------------------------------------------------------------

def cantor_pair(x: int, y: int) -> int:
    s = x + y
    return s * (s + 1) // 2 + y


def cantor_unpair(z: int) -> tuple[int, int]:
    s = (math.isqrt(8 * z + 1) - 1) // 2
    y = z - s * (s + 1) // 2
    return s - y, y


def _encode_tuple(coords: tuple[int, ...]) -> int:
    acc = coords[-1]
    for c in reversed(coords[:-1]):
        acc = cantor_pair(c, acc)
    return acc


def _decode_tuple(n: int, dim: int) -> tuple[int, ...]:
    coords = []
    for _ in range(dim - 1):
        c, n = cantor_unpair(n)
        coords.append(c)
    coords.append(n)
    return tuple(coords)


def _coords_below_power(r: Ordinal, dim: int) -> tuple[int, ...]:
    """Coefficient vector (a_{dim-1}, ..., a_0) of r < w^dim, zeros allowed."""
    coeffs = dict(r.terms)
    return tuple(coeffs.get(e, 0) for e in range(dim - 1, -1, -1))


def _power_of_coords(coords: tuple[int, ...]) -> Ordinal:
    dim = len(coords)
    terms = [(dim - 1 - i, c) for i, c in enumerate(coords) if c]
    return Ordinal(tuple(terms))


@dataclass(frozen=True)
class OmegaBijection:
    """Mutually inverse maps between {o : o < bound} and the naturals."""

    bound: Ordinal
    forward: Callable[[Ordinal], int]
    backward: Callable[[int], Ordinal]


def omega_bijection(a: Ordinal) -> OmegaBijection:
    """Canonical bijection between {o : o < a} and the naturals, for w <= a.

    Layout: ordinals in the finite tail of a map to the first naturals;
    the rest of {o : o < a} splits into blocks [base, base + w^e) along the
    CNF of a, each block coding its ordinals by coefficient vectors through
    iterated diagonal pairing, and the blocks interleave round-robin.
    """
    if a < OMEGA:
        raise NoOmegaBijection(f"{a} is finite")

    blocks: list[tuple[Ordinal, int]] = []  # (base offset, exponent)
    base = ZERO
    fin_count = 0
    fin_base = ZERO
    for e, c in a.terms:
        if e == 0:
            fin_count = c
            fin_base = base
            break
        for _ in range(c):
            blocks.append((base, e))
            base = ord_add(base, Ordinal.omega_power(e))
    k = len(blocks)

    def forward(o: Ordinal) -> int:
        if not o < a:
            raise ValueError(f"{o} is not below {a}")
        if fin_count and not o < fin_base:
            return ord_sub_left(fin_base, o).to_int()
        for i, (b, e) in enumerate(blocks):
            nxt = blocks[i + 1][0] if i + 1 < k else fin_base if fin_count else a
            if o < nxt:
                r = ord_sub_left(b, o)
                v = _encode_tuple(_coords_below_power(r, e))
                return fin_count + v * k + i
        raise AssertionError("unreachable: o below a must land in a block")

    def backward(n: int) -> Ordinal:
        if n < 0:
            raise ValueError("negative index")
        if n < fin_count:
            return ord_add(fin_base, Ordinal.from_int(n))
        v, i = divmod(n - fin_count, k)
        b, e = blocks[i]
        return ord_add(b, _power_of_coords(_decode_tuple(v, e)))

    return OmegaBijection(a, forward, backward)
