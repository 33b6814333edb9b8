"""The polarity engine: a ↦ a^⊥, a ↦ a^⊥⊥, and closed-set enumeration.

Subsets are bit-vectors tied to a carrier (an OrthoSpace or ProductSpace,
anything exposing ``size``, ``full``, ``rows`` and ``labels``).  The closure
system of a relation is the family of biclosure fixpoints, enumerated as the
intersection-closure of the per-atom polar rows plus the full set.
"""

from __future__ import annotations

import os

from . import _kernel

DEFAULT_ATOM_LIMIT = 64
DEFAULT_SET_LIMIT = 5_000_000


def atom_limit() -> int:
    return int(os.environ.get("PLAT_LIMIT_ATOMS", DEFAULT_ATOM_LIMIT))


class CarrierMismatchError(ValueError):
    """Operands live on different carriers."""


class NotClosedError(ValueError):
    """A lattice operation received an operand outside the closure system."""


class EnumerationLimitError(ValueError):
    """Carrier or closure system exceeds the configured enumeration limit."""


def _same_carrier(s1, s2) -> bool:
    return s1 is s2 or s1 == s2


class AtomSubset:
    """A subset of a carrier's atoms, as a bit-vector plus carrier identity."""

    __slots__ = ("bits", "space")

    def __init__(self, space, bits: int):
        if not 0 <= bits <= space.full:
            raise ValueError("bits outside carrier range")
        self.space = space
        self.bits = bits

    @classmethod
    def from_indices(cls, space, indices) -> "AtomSubset":
        bits = 0
        for i in indices:
            if not 0 <= i < space.size:
                raise ValueError(f"atom index out of range: {i}")
            bits |= 1 << i
        return cls(space, bits)

    @classmethod
    def empty(cls, space) -> "AtomSubset":
        return cls(space, 0)

    @classmethod
    def universe(cls, space) -> "AtomSubset":
        return cls(space, space.full)

    def indices(self):
        m, out = self.bits, []
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def cardinality(self) -> int:
        return self.bits.bit_count()

    def _check(self, other: "AtomSubset"):
        if not _same_carrier(self.space, other.space):
            raise CarrierMismatchError("subsets belong to different carriers")

    def __and__(self, other):
        self._check(other)
        return AtomSubset(self.space, self.bits & other.bits)

    def __or__(self, other):
        self._check(other)
        return AtomSubset(self.space, self.bits | other.bits)

    def __sub__(self, other):
        self._check(other)
        return AtomSubset(self.space, self.bits & ~other.bits)

    def complement(self):
        return AtomSubset(self.space, self.space.full ^ self.bits)

    def __le__(self, other):
        self._check(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other):
        return self <= other and self.bits != other.bits

    def __contains__(self, atom: int) -> bool:
        return bool(self.bits >> atom & 1)

    def __eq__(self, other):
        return (isinstance(other, AtomSubset) and self.bits == other.bits
                and _same_carrier(self.space, other.space))

    def __hash__(self):
        return hash(self.bits)

    def __repr__(self):
        names = [self.space.labels[i] for i in self.indices()]
        return "{" + ",".join(names) + "}"


def polar(space, a: AtomSubset) -> AtomSubset:
    """Atoms related to every atom of ``a``; polar(∅) = Σ."""
    if not _same_carrier(space, a.space):
        raise CarrierMismatchError("subset does not belong to this carrier")
    return AtomSubset(space,
                      _kernel.polar(space.rows, a.bits, space.full, space.size))


def biclosure(space, a: AtomSubset) -> AtomSubset:
    """polar∘polar: extensive, monotone and idempotent."""
    return polar(space, polar(space, a))


def _canonical_key(mask: int):
    # cardinality, then lexicographic on the ascending index tuple
    m, ids = mask, []
    while m:
        low = m & -m
        ids.append(low.bit_length() - 1)
        m ^= low
    return len(ids), tuple(ids)


class ClosureSystem:
    """A fully enumerated intersection-closed family over one carrier.

    ``from_relation`` systems compute joins via biclosure; explicit families
    (e.g. traces of subspaces) fall back to a least-superset scan, which
    agrees with biclosure whenever both apply.
    """

    def __init__(self, carrier, masks, from_relation=True):
        self.carrier = carrier
        self.masks = sorted(set(masks), key=_canonical_key)
        self.index = {m: i for i, m in enumerate(self.masks)}
        self.from_relation = from_relation
        if 0 not in self.index or carrier.full not in self.index:
            raise ValueError("closure system must contain ∅ and Σ")

    def __len__(self):
        return len(self.masks)

    def __iter__(self):
        return (AtomSubset(self.carrier, m) for m in self.masks)

    def __contains__(self, a) -> bool:
        bits = a.bits if isinstance(a, AtomSubset) else a
        return bits in self.index

    def subset(self, mask: int) -> AtomSubset:
        return AtomSubset(self.carrier, mask)

    def _operand(self, a) -> int:
        if isinstance(a, AtomSubset):
            if not _same_carrier(a.space, self.carrier):
                raise CarrierMismatchError(
                    "operand does not belong to this system's carrier")
            a = a.bits
        if a not in self.index:
            raise NotClosedError(f"operand is not a closed set: {a:#x}")
        return a

    def meet(self, a, b) -> AtomSubset:
        return self.subset(self._operand(a) & self._operand(b))

    def join(self, a, b) -> AtomSubset:
        u = self._operand(a) | self._operand(b)
        if self.from_relation:
            j = _kernel.biclosure(self.carrier.rows, u, self.carrier.full,
                                  self.carrier.size)
        else:
            j = self.carrier.full
            for m in self.masks:
                if m & u == u:
                    j &= m
        if j not in self.index:
            raise NotClosedError("join fell outside the system; "
                                 "the family is not a closure system")
        return self.subset(j)

    def join_mask(self, u: int) -> int:
        """Least closed superset of an arbitrary mask (not required closed)."""
        if self.from_relation:
            return _kernel.biclosure(self.carrier.rows, u, self.carrier.full,
                                     self.carrier.size)
        j = self.carrier.full
        for m in self.masks:
            if m & u == u:
                j &= m
        return j

    def covers(self, a, b) -> bool:
        """True iff b covers a: a ⊊ b with no closed set strictly between."""
        am, bm = self._operand(a), self._operand(b)
        if am & ~bm or am == bm:
            raise ValueError("covers() requires a ⊊ b")
        for m in self.masks:
            if m != am and m != bm and am & ~m == 0 and m & ~bm == 0:
                return False
        return True

    def atoms(self):
        """Closed singletons, in atom order where present."""
        return [m for m in self.masks if m.bit_count() == 1]

    def coatoms(self):
        """Maximal proper members."""
        out = []
        for m in self.masks:
            if m == self.carrier.full:
                continue
            if not any(n != m and n != self.carrier.full and m & ~n == 0
                       for n in self.masks):
                out.append(m)
        return out


def enumerate_closed(space, max_atoms=None, max_sets=DEFAULT_SET_LIMIT
                     ) -> ClosureSystem:
    """Enumerate {a : a^⊥⊥ = a} as the intersection-closure of the polar
    rows plus Σ (valid because a^⊥ = ∩_{p∈a} p^⊥)."""
    limit = atom_limit() if max_atoms is None else max_atoms
    if space.size > limit:
        raise EnumerationLimitError(
            f"carrier has {space.size} atoms, enumeration limit is {limit}")
    try:
        masks = _kernel.intersection_closure(space.rows, space.full,
                                             space.size, max_sets)
    except ValueError as exc:
        raise EnumerationLimitError(str(exc)) from None
    return ClosureSystem(space, masks)


def brute_force_closed(space, max_atoms=20) -> ClosureSystem:
    """Oracle enumeration: filter all 2^Σ subsets by biclosure(a) = a.

    Exponential; only for cross-checking enumerate_closed on small carriers.
    """
    if space.size > max_atoms:
        raise EnumerationLimitError(
            f"brute force limited to {max_atoms} atoms")
    rows, full, n = space.rows, space.full, space.size
    masks = [m for m in range(1 << n)
             if _kernel.biclosure(rows, m, full, n) == m]
    return ClosureSystem(space, masks)


def dump_system(sys: ClosureSystem) -> str:
    """Canonical text dump: header '<atoms> <count>', then one lowercase hex
    bit-vector per closed set in canonical order."""
    width = (sys.carrier.size + 3) // 4
    lines = [f"{sys.carrier.size} {len(sys)}"]
    lines += [format(m, f"0{width}x") for m in sys.masks]
    return "\n".join(lines) + "\n"
