"""Structural analysis of enumerated closure systems.

Covering property, orthomodularity, center and central covers,
automorphism search, transitivity, and existence of an orthocomplementation.
All witnesses are lexicographically minimal in the canonical closed-set
order, so reports are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .closure import AtomSubset, ClosureSystem, EnumerationLimitError, polar
from .orthospace import Verdict

AUTOMORPHISM_SEARCH_LIMIT = 16
ORTHOCOMPLEMENT_SEARCH_LIMIT = 1000


def _ids(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class PermutationGroup:
    degree: int
    elements: tuple
    closed_flag: bool

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def compose(p, q):
    """(p∘q)(i) = p(q(i))."""
    return tuple(p[q[i]] for i in range(len(q)))


def invert(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def apply_perm_mask(perm, mask):
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << perm[low.bit_length() - 1]
        mask ^= low
    return out


def is_closed_group(elements, degree) -> bool:
    es = set(elements)
    if tuple(range(degree)) not in es:
        return False
    return all(invert(p) in es for p in es) and all(
        compose(p, q) in es for p in es for q in es)


def close_group(generators, degree, cap=1_000_000):
    """Group generated by ``generators`` under composition and inverse."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in generators] + [invert(g) for g in generators]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                r = compose(g, p)
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
                    if len(seen) > cap:
                        raise EnumerationLimitError(
                            f"generated group exceeds {cap} elements")
        frontier = nxt
    return sorted(seen)


def covering_property(sys: ClosureSystem) -> Verdict:
    """Does a ∨ p cover a for every closed a and atom p ∉ a?

    On failure the witness is the minimal (a, p, intermediate c).
    """
    for am in sys.masks:
        if am == sys.carrier.full:
            continue
        for p in range(sys.carrier.size):
            if am >> p & 1:
                continue
            bm = sys.join_mask(am | (1 << p))
            for cm in sys.masks:
                if cm != am and cm != bm and am & ~cm == 0 and cm & ~bm == 0:
                    return Verdict(False, (_ids(am), p, _ids(cm)))
    return Verdict(True, None)


def orthomodularity(space, sys: ClosureSystem) -> Verdict:
    """b = a ∨ (b ∧ a^⊥) for all closed a ⊆ b; minimal (a, b) on failure."""
    for am in sys.masks:
        pa = polar(space, AtomSubset(space, am)).bits
        for bm in sys.masks:
            if am & ~bm:
                continue
            if sys.join_mask(am | (bm & pa)) != bm:
                return Verdict(False, (_ids(am), _ids(bm)))
    return Verdict(True, None)


def center(sys: ClosureSystem, space):
    """Central elements: z and Σ∖z closed, polar(z) = Σ∖z, and
    (x, y) ↦ x ∨ y is a bijection [0,z]×[0,Σ∖z] → the whole system."""
    full = space.full
    out = []
    for zm in sys.masks:
        cm = full ^ zm
        if cm not in sys.index:
            continue
        if polar(space, AtomSubset(space, zm)).bits != cm:
            continue
        below_z = [m for m in sys.masks if m & ~zm == 0]
        below_c = [m for m in sys.masks if m & ~cm == 0]
        ok = True
        for x in below_z:
            for y in below_c:
                j = sys.join_mask(x | y)
                if j & zm != x or j & cm != y:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(zm)
    return out


def central_cover(sys: ClosureSystem, space, p: int):
    """Meet of all central elements containing atom p."""
    acc = space.full
    for zm in center(sys, space):
        if zm >> p & 1:
            acc &= zm
    return acc


def is_irreducible(sys: ClosureSystem, space) -> bool:
    return len(center(sys, space)) == 2


def _is_automorphism(space, sys, perm, mode):
    if mode == "ortho":
        for p in range(space.size):
            if apply_perm_mask(perm, space.rows[p]) != space.rows[perm[p]]:
                return False
    for m in sys.masks:
        if apply_perm_mask(perm, m) not in sys.index:
            return False
    return True


def automorphisms(space, sys: ClosureSystem, mode="ortho", generators=None,
                  max_atoms=AUTOMORPHISM_SEARCH_LIMIT) -> PermutationGroup:
    """Atom permutations preserving the closed-set family, and for
    mode='ortho' additionally commuting with the polarity on atoms.

    Full backtracking search up to ``max_atoms``; above that, supply
    generators and they are verified and closed into a group instead.
    """
    if mode not in ("lattice", "ortho"):
        raise ValueError(f"unknown mode: {mode}")
    n = space.size
    if generators is not None:
        for g in generators:
            if sorted(g) != list(range(n)):
                raise ValueError(f"not a permutation of {n} atoms: {g}")
            if not _is_automorphism(space, sys, tuple(g), mode):
                raise ValueError(f"supplied generator is not an "
                                 f"automorphism: {tuple(g)}")
        elems = close_group(generators, n)
        return PermutationGroup(n, tuple(elems), True)
    if n > max_atoms:
        raise EnumerationLimitError(
            f"automorphism search limit {max_atoms} exceeded for {n} atoms "
            "and no generators supplied")

    # profile pruning: atoms may only map to atoms with the same closed-set
    # membership signature (and polar degree in ortho mode)
    def profile(p):
        sizes = sorted(m.bit_count() for m in sys.masks if m >> p & 1)
        if mode == "ortho":
            return space.rows[p].bit_count(), tuple(sizes)
        return tuple(sizes)

    profs = [profile(p) for p in range(n)]
    found = []
    image = [-1] * n
    used = [False] * n

    def backtrack(k):
        if k == n:
            perm = tuple(image)
            if _is_automorphism(space, sys, perm, mode):
                found.append(perm)
            return
        for q in range(n):
            if used[q] or profs[q] != profs[k]:
                continue
            if mode == "ortho":
                ok = all((space.rows[k] >> j & 1) ==
                         (space.rows[q] >> image[j] & 1)
                         for j in range(k))
                if not ok:
                    continue
            image[k] = q
            used[q] = True
            backtrack(k + 1)
            used[q] = False
        image[k] = -1

    backtrack(0)
    elems = sorted(found)
    return PermutationGroup(n, tuple(elems),
                            is_closed_group(elems, n))


def is_transitive(group: PermutationGroup) -> bool:
    """True iff the orbit of atom 0 under the group is every atom."""
    if group.degree == 0:
        return True
    orbit = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in group.elements:
                y = g[x]
                if y not in orbit:
                    orbit.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(orbit) == group.degree


def _minimal_nonzero(sys: ClosureSystem):
    out = []
    for m in sys.masks:
        if m == 0:
            continue
        if not any(x != 0 and x != m and x & ~m == 0 for x in sys.masks):
            out.append(m)
    return out


def find_orthocomplementation(sys: ClosureSystem,
                              max_elements=ORTHOCOMPLEMENT_SEARCH_LIMIT,
                              atom_order=None):
    """Search for an order-reversing involution ' with a∧a' = ∅, a∨a' = Σ.

    Returns the mapping {mask: mask'} or None after exhaustive backtracking
    over atom → coatom assignments (an orthocomplementation of an atomistic
    lattice is determined by its restriction to the atoms).  Fast necessary
    filters run first: atom and coatom counts must match and the down-degree
    profile must equal the up-degree profile.
    """
    if len(sys) > max_elements:
        raise EnumerationLimitError(
            f"system has {len(sys)} elements, search limit {max_elements}")
    atoms = _minimal_nonzero(sys)
    coatoms = sys.coatoms()
    if len(atoms) != len(coatoms):
        return None
    down = sorted(sum(1 for x in sys.masks if x & ~m == 0) for m in sys.masks)
    up = sorted(sum(1 for x in sys.masks if m & ~x == 0) for m in sys.masks)
    if down != up:
        return None

    order = list(atom_order) if atom_order is not None else range(len(atoms))
    ordered_atoms = [atoms[i] for i in order]
    assign = {}

    def consistent(a, c):
        if a & ~c == 0:  # would give a ∧ a' = a ≠ ∅
            return False
        if sys.join_mask(a | c) != sys.carrier.full:
            return False
        for b, cb in assign.items():
            if ((b & ~c == 0) != (a & ~cb == 0)) or cb == c:
                return False
        return True

    def build_map():
        table = {}
        for m in sys.masks:
            img = sys.carrier.full
            for a in atoms:
                if a & ~m == 0:
                    img &= assign[a]
            if img not in sys.index:
                return None
            table[m] = img
        for m, im in table.items():
            if table[im] != m or m & im != 0:
                return None
            if sys.join_mask(m | im) != sys.carrier.full:
                return None
        return table

    def backtrack(k):
        if k == len(ordered_atoms):
            return build_map()
        a = ordered_atoms[k]
        for c in coatoms:
            if consistent(a, c):
                assign[a] = c
                result = backtrack(k + 1)
                if result is not None:
                    return result
                del assign[a]
        return None

    return backtrack(0)


def analysis_report(space, sys: ClosureSystem, aut_limit=12) -> dict:
    """Bundle of the structural verdicts, JSON-shaped."""
    cov = covering_property(sys)
    om = orthomodularity(space, sys)
    cen = center(sys, space)
    if space.size <= aut_limit:
        aut_order = len(automorphisms(space, sys, mode="ortho"))
    else:
        aut_order = None
    oc = find_orthocomplementation(sys)
    return {
        "covering": {"holds": cov.holds, "witness": cov.witness},
        "orthomodular": {"holds": om.holds, "witness": om.witness},
        "center_size": len(cen),
        "irreducible": len(cen) == 2,
        "aut_order": aut_order,
        "orthocomplementation": "none" if oc is None else "found",
    }
