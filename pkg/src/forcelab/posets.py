"""Finite forcing posets.

Elements are identified by index; ``labels[i]`` is the public name of element
``i``.  The order is stored as up-set bitmasks: ``up[i]`` has bit ``j`` set
exactly when ``i <= j``, read "j extends i" (j is the stronger condition).
Every poset here has a weakest element, the index ``bottom``, below all
others.

Antichains follow forcing usage: a set of pairwise *incompatible* elements,
where p and q are compatible when some r extends both.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .errors import InputError


def _bit_indices(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class Poset:
    labels: tuple
    up: tuple[int, ...]
    bottom: int

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_relation(
        labels: Sequence[Hashable],
        leq: Callable[[Hashable, Hashable], bool] | Iterable[tuple[Hashable, Hashable]],
    ) -> "Poset":
        """Build a poset from labels and a reflexive order relation.

        ``leq`` is either a predicate on label pairs or an iterable of
        ``(weaker, stronger)`` pairs (reflexive pairs may be omitted).
        Raises InputError unless the relation is a partial order with a
        weakest element.
        """
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise InputError("duplicate labels")
        n = len(labels)
        if n == 0:
            raise InputError("empty poset")
        index = {lab: i for i, lab in enumerate(labels)}
        if callable(leq):
            rel = [
                [bool(leq(a, b)) for b in labels] for a in labels
            ]
        else:
            rel = [[False] * n for _ in range(n)]
            for a, b in leq:
                if a not in index or b not in index:
                    raise InputError(f"relation mentions unknown label {a!r} or {b!r}")
                rel[index[a]][index[b]] = True
        for i in range(n):
            rel[i][i] = True
        # transitive closure; from_relation accepts a generating set of pairs
        for k in range(n):
            for i in range(n):
                if rel[i][k]:
                    for j in range(n):
                        if rel[k][j]:
                            rel[i][j] = True
        for i in range(n):
            for j in range(n):
                if i != j and rel[i][j] and rel[j][i]:
                    raise InputError(
                        f"not antisymmetric: {labels[i]!r} and {labels[j]!r}"
                    )
        up = tuple(
            sum(1 << j for j in range(n) if rel[i][j]) for i in range(n)
        )
        full = (1 << n) - 1
        bottoms = [i for i in range(n) if up[i] == full]
        if not bottoms:
            raise InputError("no weakest element")
        return Poset(labels=labels, up=up, bottom=bottoms[0])

    @staticmethod
    def from_covers(
        labels: Sequence[Hashable],
        covers: Iterable[tuple[Hashable, Hashable]],
    ) -> "Poset":
        """Build a poset from ``(weaker, stronger)`` cover pairs."""
        return Poset.from_relation(labels, covers)

    @staticmethod
    def chain(n: int) -> "Poset":
        """Linear order 0 < 1 < ... < n-1."""
        if n < 1:
            raise InputError("chain needs at least one element")
        full = (1 << n) - 1
        up = tuple((full >> i) << i for i in range(n))
        return Poset(labels=tuple(range(n)), up=up, bottom=0)

    @staticmethod
    def flat(tips: Sequence[Hashable], bottom_label: Hashable = "bot") -> "Poset":
        """A weakest element with pairwise incomparable elements above it."""
        labels = (bottom_label, *tips)
        n = len(labels)
        if len(set(labels)) != n:
            raise InputError("duplicate labels")
        up = ((1 << n) - 1,) + tuple(1 << i for i in range(1, n))
        return Poset(labels=labels, up=up, bottom=0)

    @staticmethod
    def product(left: "Poset", right: "Poset") -> "Poset":
        """Componentwise order on pairs of labels."""
        labels = tuple(
            (a, b) for a in left.labels for b in right.labels
        )
        nr = len(right.labels)

        def leq(x, y):
            return left.leq_labels(x[0], y[0]) and right.leq_labels(x[1], y[1])

        n = len(labels)
        up = []
        for i, x in enumerate(labels):
            m = 0
            for j, y in enumerate(labels):
                if leq(x, y):
                    m |= 1 << j
            up.append(m)
        return Poset(labels=labels, up=tuple(up), bottom=left.bottom * nr + right.bottom)

    def induced(self, members: Iterable[Hashable]) -> "Poset":
        """Restrict to a label subset that has its own weakest element."""
        keep = [self.index(lab) for lab in members]
        if len(set(keep)) != len(keep):
            raise InputError("duplicate labels in subset")
        if not keep:
            raise InputError("empty subset")
        keep.sort()
        pos = {old: new for new, old in enumerate(keep)}
        up = []
        for old in keep:
            m = 0
            for other in keep:
                if self.up[old] >> other & 1:
                    m |= 1 << pos[other]
            up.append(m)
        full = (1 << len(keep)) - 1
        bottoms = [i for i, m in enumerate(up) if m == full]
        if not bottoms:
            raise InputError("subset has no weakest element")
        return Poset(
            labels=tuple(self.labels[old] for old in keep),
            up=tuple(up),
            bottom=bottoms[0],
        )

    # -- basic queries -----------------------------------------------------

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def index(self, label: Hashable) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"unknown label {label!r}") from None

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def leq_labels(self, a: Hashable, b: Hashable) -> bool:
        return self.leq(self.index(a), self.index(b))

    def compatible(self, i: int, j: int) -> bool:
        """Some element extends both i and j."""
        return bool(self.up[i] & self.up[j])

    def extensions(self, i: int) -> list[int]:
        return _bit_indices(self.up[i])

    def down_mask(self, i: int) -> int:
        """Bitmask of elements weaker than or equal to i."""
        m = 0
        for j in range(len(self.labels)):
            if self.up[j] >> i & 1:
                m |= 1 << j
        return m

    def maximal_mask(self) -> int:
        """Bitmask of elements with no proper extension."""
        m = 0
        for i, u in enumerate(self.up):
            if u == 1 << i:
                m |= 1 << i
        return m

    def labels_of(self, mask: int) -> frozenset:
        return frozenset(self.labels[i] for i in _bit_indices(mask))

    def mask_of(self, members: Iterable[Hashable]) -> int:
        m = 0
        for lab in members:
            m |= 1 << self.index(lab)
        return m

    def covers(self) -> list[tuple[Hashable, Hashable]]:
        """Cover pairs (weaker, stronger) of the Hasse diagram."""
        out = []
        n = len(self.labels)
        for i in range(n):
            for j in range(n):
                if i == j or not self.leq(i, j):
                    continue
                strict_between = self.up[i] & self.down_mask(j) & ~(1 << i) & ~(1 << j)
                if not strict_between:
                    out.append((self.labels[i], self.labels[j]))
        return out

    # -- density and antichains ---------------------------------------------

    def is_dense(self, mask: int) -> bool:
        """Every element has an extension in the set."""
        return all(self.up[i] & mask for i in range(len(self.labels)))

    def is_predense(self, mask: int) -> bool:
        """Every element is compatible with a member of the set."""
        for i in range(len(self.labels)):
            if not any(self.up[i] & self.up[j] for j in _bit_indices(mask)):
                return False
        return True

    def is_antichain(self, mask: int) -> bool:
        idx = _bit_indices(mask)
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                if self.compatible(idx[a], idx[b]):
                    return False
        return True

    def is_maximal_antichain(self, mask: int) -> bool:
        return self.is_antichain(mask) and self.is_predense(mask)

    def maximal_antichains(self) -> list[int]:
        """All maximal antichains as bitmasks, sorted by index tuple."""
        n = len(self.labels)
        found = []

        def grow(start: int, mask: int) -> None:
            if self.is_predense(mask):
                found.append(mask)
                # a predense antichain admits no incompatible extension
                return
            for i in range(start, n):
                if all(
                    not self.compatible(i, j) for j in _bit_indices(mask)
                ):
                    grow(i + 1, mask | 1 << i)

        grow(0, 0)
        found.sort(key=lambda m: tuple(_bit_indices(m)))
        return found
