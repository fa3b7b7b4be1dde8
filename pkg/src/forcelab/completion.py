"""Boolean completions of finite posets, and finite atom-set algebras.

A finite Boolean algebra is represented on its atoms: an element is a bitmask
over atom indices.  The strengthening order matches the poset convention:
``b`` is stronger than ``c`` when ``b`` is a nonzero subset of ``c``.

For a finite poset the regular-open algebra is computed directly on the
maximal elements: the atoms of the completion correspond to maximal elements,
and a condition's Boolean value is the set of maximal elements extending it.
``regular_open_sets`` provides the independent slow route (enumerate subsets,
keep the regular open ones) against which the direct construction is tested.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InputError
from .posets import Poset, _bit_indices


def up_closure_mask(poset: Poset, mask: int) -> int:
    out = 0
    for i in _bit_indices(mask):
        out |= poset.up[i]
    return out


def closure_mask(poset: Poset, mask: int) -> int:
    """Elements with an extension inside the set."""
    out = 0
    for i in range(len(poset.labels)):
        if poset.up[i] & mask:
            out |= 1 << i
    return out


def interior_mask(poset: Poset, mask: int) -> int:
    """Elements whose whole up-set lies inside the set."""
    out = 0
    for i in range(len(poset.labels)):
        if poset.up[i] & ~mask == 0:
            out |= 1 << i
    return out


def regularize(poset: Poset, mask: int) -> int:
    """interior(closure(mask)): the regular-open value of a set of conditions."""
    return interior_mask(poset, closure_mask(poset, mask))


def regular_open_sets(poset: Poset) -> list[int]:
    """All regular open subsets of the poset, by brute-force enumeration.

    Exponential in the element count; this is the oracle route, kept
    deliberately independent of the atom-based construction.
    """
    n = len(poset.labels)
    if n > 16:
        raise InputError("poset too large for brute-force enumeration")
    out = [s for s in range(1 << n) if regularize(poset, s) == s]
    out.sort()
    return out


@dataclass(frozen=True)
class CompleteAlgebra:
    """Finite Boolean algebra on ``atom_count`` atoms, with a source poset.

    ``atoms[k]`` is the source label of the maximal element realizing atom k;
    ``dense_map[i]`` is the atom-set value of source element i.
    """

    atom_count: int
    atoms: tuple
    source: Poset
    dense_map: tuple[int, ...]

    @property
    def full(self) -> int:
        return (1 << self.atom_count) - 1

    def value(self, i: int) -> int:
        """Boolean value of source element i."""
        return self.dense_map[i]

    def value_of_label(self, label) -> int:
        return self.dense_map[self.source.index(label)]

    def check_element(self, mask: int) -> int:
        if not 0 <= mask <= self.full:
            raise InputError(f"not an element of the algebra: {mask!r}")
        return mask

    def leq(self, b: int, c: int) -> bool:
        """b <= c in forcing convention: c is stronger, i.e. 0 != c subset b."""
        self.check_element(b)
        self.check_element(c)
        return c != 0 and c & ~b == 0

    def open_set(self, mask: int) -> int:
        """The regular open subset of the source corresponding to an atom-set."""
        self.check_element(mask)
        out = 0
        for i in range(len(self.source.labels)):
            if self.dense_map[i] & ~mask == 0:
                out |= 1 << i
        return out

    def nonzero_poset(self, members: Iterable[int] | None = None) -> Poset:
        """Poset of nonzero elements under the strengthening order.

        Labels are the element bitmasks themselves; the bottom is the full
        atom set (the weakest condition).
        """
        if members is None:
            members = range(1, self.full + 1)
        labels = sorted({self.check_element(m) for m in members})
        if any(m == 0 for m in labels):
            raise InputError("zero is not a condition")
        if self.full not in labels:
            raise InputError("nonzero poset needs the unit element")
        up = []
        for b in labels:
            m = 0
            for j, c in enumerate(labels):
                if c & ~b == 0:
                    m |= 1 << j
            up.append(m)
        return Poset(labels=tuple(labels), up=tuple(up), bottom=labels.index(self.full))

    def atom_order(self) -> Poset:
        """The flat poset of atoms below the unit: the completion's skeleton."""
        if self.atom_count == 1:
            # the single atom is the unit; the flat picture degenerates
            return Poset.from_relation((self.full,), lambda x, y: True)
        return Poset.flat(tuple(1 << k for k in range(self.atom_count)), bottom_label=self.full)


def regular_open_completion(poset: Poset) -> CompleteAlgebra:
    """The regular-open Boolean completion, presented on its atoms.

    Atoms correspond to the maximal elements of the poset; dense_map(p) is
    the set of maximal elements extending p, which equals the regular-open
    value of the up-set of p.
    """
    max_mask = poset.maximal_mask()
    tops = _bit_indices(max_mask)
    index_of_top = {t: k for k, t in enumerate(tops)}
    dense_map = []
    for i in range(len(poset.labels)):
        m = 0
        for t in _bit_indices(poset.up[i] & max_mask):
            m |= 1 << index_of_top[t]
        dense_map.append(m)
    return CompleteAlgebra(
        atom_count=len(tops),
        atoms=tuple(poset.labels[t] for t in tops),
        source=poset,
        dense_map=tuple(dense_map),
    )


@dataclass(frozen=True)
class Subalgebra:
    """A subalgebra of the powerset of ``atom_count`` atoms.

    ``members`` always contains 0 and the full set and is closed under
    complement and intersection; finite subalgebras are automatically
    complete, so this also carries the complete-suborder role.
    """

    atom_count: int
    members: frozenset[int]

    def __post_init__(self):
        full = (1 << self.atom_count) - 1
        if 0 not in self.members or full not in self.members:
            raise InputError("subalgebra must contain 0 and the unit")
        for b in self.members:
            if not 0 <= b <= full:
                raise InputError(f"not an element of the ambient algebra: {b!r}")
            if full & ~b not in self.members:
                raise InputError("subalgebra not closed under complement")
            for c in self.members:
                if b & c not in self.members:
                    raise InputError("subalgebra not closed under meet")

    @property
    def full(self) -> int:
        return (1 << self.atom_count) - 1

    def blocks(self) -> tuple[int, ...]:
        """The atoms of the subalgebra: minimal nonzero members, a partition."""
        sigs: dict[tuple, int] = {}
        ordered = sorted(self.members)
        for a in range(self.atom_count):
            sig = tuple(m >> a & 1 for m in ordered)
            sigs[sig] = sigs.get(sig, 0) | 1 << a
        return tuple(sorted(sigs.values()))

    @staticmethod
    def trivial(atom_count: int) -> "Subalgebra":
        return Subalgebra(atom_count, frozenset({0, (1 << atom_count) - 1}))

    @staticmethod
    def whole(atom_count: int) -> "Subalgebra":
        return Subalgebra(atom_count, frozenset(range(1 << atom_count)))

    @staticmethod
    def from_blocks(atom_count: int, blocks: Iterable[int]) -> "Subalgebra":
        blocks = list(blocks)
        full = (1 << atom_count) - 1
        seen = 0
        for b in blocks:
            if b == 0 or b & ~full or b & seen:
                raise InputError("blocks must be disjoint nonzero atom-sets")
            seen |= b
        if seen != full:
            raise InputError("blocks must cover every atom")
        members = set()
        for pick in range(1 << len(blocks)):
            m = 0
            for j in range(len(blocks)):
                if pick >> j & 1:
                    m |= blocks[j]
            members.add(m)
        return Subalgebra(atom_count, frozenset(members))


def generated_subalgebra(algebra: CompleteAlgebra | int, seeds: Iterable[int]) -> Subalgebra:
    """Smallest subalgebra containing the seed elements.

    Two atoms fall in the same block exactly when no seed separates them;
    the subalgebra consists of all unions of blocks.
    """
    atom_count = algebra if isinstance(algebra, int) else algebra.atom_count
    full = (1 << atom_count) - 1
    seeds = list(seeds)
    for s in seeds:
        if not 0 <= s <= full:
            raise InputError(f"seed {s!r} is not an element of the algebra")
    blocks: dict[tuple, int] = {}
    for a in range(atom_count):
        sig = tuple(s >> a & 1 for s in seeds)
        blocks[sig] = blocks.get(sig, 0) | 1 << a
    return Subalgebra.from_blocks(atom_count, blocks.values())


def intersect_subalgebras(s1: Subalgebra, s2: Subalgebra) -> Subalgebra:
    if s1.atom_count != s2.atom_count:
        raise InputError("subalgebras of different ambient algebras")
    return Subalgebra(s1.atom_count, s1.members & s2.members)
