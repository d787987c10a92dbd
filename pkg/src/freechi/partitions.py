"""Set partitions, the noncrossing lattice NC(n) and Kreweras complements.

A :class:`Partition` is stored in canonical form: every block sorted,
blocks ordered by their smallest element. The ground set is
``{base, ..., base + n - 1}``; ``base`` is 1 everywhere except for the
extended Kreweras complement, which lives on ``{0, ..., n}``.

Text form is ``"1,3|2|4"``; JSON form is ``[[1, 3], [2], [4]]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from . import kernels
from .errors import SizeLimitError

#: largest n for which :func:`enumerate_nc` materialises NC(n)
NC_ENUMERATION_CAP = 14


@dataclass(frozen=True)
class Partition:
    n: int
    blocks: tuple[tuple[int, ...], ...]
    base: int = 1

    def __post_init__(self):
        seen = []
        for block in self.blocks:
            if not block:
                raise ValueError("empty block")
            if any(a >= b for a, b in zip(block, block[1:])):
                raise ValueError(f"block {block} is not strictly increasing")
            seen.extend(block)
        if sorted(seen) != list(range(self.base, self.base + self.n)):
            raise ValueError("blocks do not partition the ground set")
        if any(a[0] >= b[0] for a, b in zip(self.blocks, self.blocks[1:])):
            raise ValueError("blocks not in canonical order")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None, base: int = 1) -> "Partition":
        bl = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0] if b else 0)
        if n is None:
            n = sum(len(b) for b in bl)
        return cls(n, tuple(bl), base)

    @classmethod
    def from_labels(cls, labels: Sequence[int], base: int = 1) -> "Partition":
        """Partition whose positions carry equal labels iff they share a block."""
        groups: dict[int, list[int]] = {}
        for i, lab in enumerate(labels):
            groups.setdefault(lab, []).append(i + base)
        bl = sorted((tuple(g) for g in groups.values()), key=lambda b: b[0])
        return cls(len(labels), tuple(bl), base)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Read the ``"1,3|2|4"`` form, or the JSON array-of-arrays form."""
        text = text.strip()
        if text.startswith("["):
            data = json.loads(text)
            return cls.from_blocks([[int(x) for x in b] for b in data])
        blocks = []
        for chunk in text.split("|"):
            chunk = chunk.strip()
            if not chunk:
                raise ValueError(f"empty block in partition text {text!r}")
            blocks.append([int(x) for x in chunk.split(",")])
        labels = sorted(x for b in blocks for x in b)
        base = labels[0] if labels else 1
        return cls.from_blocks(blocks, base=base)

    def __str__(self):
        return "|".join(",".join(map(str, b)) for b in self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def labels(self) -> tuple[int, ...]:
        """Block index of each element, blocks numbered in canonical order."""
        out = [0] * self.n
        for j, block in enumerate(self.blocks):
            for x in block:
                out[x - self.base] = j
        return tuple(out)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def mask(self, block: Sequence[int]) -> int:
        return sum(1 << (x - self.base) for x in block)

    def block_of(self, x: int) -> tuple[int, ...]:
        for b in self.blocks:
            if x in b:
                return b
        raise ValueError(f"{x} not in ground set")

    def restrict(self, elements: Sequence[int]) -> "Partition":
        """Restriction to ``elements`` (sorted), relabelled to 1..len."""
        index = {x: i + 1 for i, x in enumerate(sorted(elements))}
        blocks = []
        for b in self.blocks:
            sub = [index[x] for x in b if x in index]
            if sub:
                blocks.append(sub)
        return Partition.from_blocks(blocks, n=len(index))

    def shifted(self, base: int) -> "Partition":
        d = base - self.base
        return Partition(self.n, tuple(tuple(x + d for x in b) for b in self.blocks), base)


@dataclass(frozen=True)
class BlockSet:
    """A family of subsets of {1..n} that must not occur as blocks."""

    n: int
    forbidden: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for s in self.forbidden:
            if not s or list(s) != sorted(set(s)):
                raise ValueError(f"forbidden set {s} must be nonempty and sorted")
            if s[0] < 1 or s[-1] > self.n:
                raise ValueError(f"forbidden set {s} not inside 1..{self.n}")

    def masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << (x - 1) for x in s) for s in self.forbidden)


def zero(n: int) -> Partition:
    return Partition(n, tuple((i,) for i in range(1, n + 1)))


def one(n: int) -> Partition:
    return Partition(n, (tuple(range(1, n + 1)),) if n else ())


def _check_same(p: Partition, q: Partition):
    if p.n != q.n or p.base != q.base:
        raise ValueError("partitions live on different ground sets")


def _crosses(a: Sequence[int], b: Sequence[int]) -> bool:
    seq = sorted([(x, 0) for x in a] + [(x, 1) for x in b])
    runs = 1 + sum(1 for u, v in zip(seq, seq[1:]) if u[1] != v[1])
    return runs >= 4


def is_noncrossing(p: Partition) -> bool:
    bl = p.blocks
    return not any(_crosses(bl[i], bl[j]) for i in range(len(bl)) for j in range(i + 1, len(bl)))


def is_even(p: Partition) -> bool:
    return all(len(b) % 2 == 0 for b in p.blocks)


def iter_nc(n: int) -> Iterator[Partition]:
    """Stream NC(n) in a fixed order; no size cap."""
    for labels in kernels.iter_nc_labels(n):
        yield Partition.from_labels(labels)


def enumerate_nc(n: int) -> list[Partition]:
    """All of NC(n), each exactly once, in the order of :func:`iter_nc`."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > NC_ENUMERATION_CAP:
        raise SizeLimitError(
            f"NC({n}) exceeds the enumeration cap n <= {NC_ENUMERATION_CAP}; use iter_nc"
        )
    return list(iter_nc(n))


def enumerate_nc_filtered(
    n: int,
    kind: str = "all",
    forbidden: BlockSet | Iterable[Sequence[int]] | None = None,
    required: Sequence[int] | None = None,
) -> list[Partition]:
    """Members of NC(n) of the given kind (``all``, ``pair`` or ``even``) that
    contain ``required`` as a block and no forbidden set as a block."""
    if kind not in ("all", "pair", "even"):
        raise ValueError(f"unknown kind {kind!r}")
    if isinstance(forbidden, BlockSet):
        forb = {tuple(s) for s in forbidden.forbidden}
    else:
        forb = {tuple(sorted(s)) for s in (forbidden or ())}
    for s in forb:
        if not s or s[0] < 1 or s[-1] > n:
            raise ValueError(f"filter set {s} not inside 1..{n}")
    req = tuple(sorted(required)) if required is not None else None
    if req is not None and (not req or req[0] < 1 or req[-1] > n):
        raise ValueError(f"required set {req} not inside 1..{n}")
    out = []
    for p in iter_nc(n):
        if kind == "pair" and any(len(b) != 2 for b in p.blocks):
            continue
        if kind == "even" and not is_even(p):
            continue
        if req is not None and req not in p.blocks:
            continue
        if forb and any(b in forb for b in p.blocks):
            continue
        out.append(p)
    return out


def leq(p: Partition, q: Partition) -> bool:
    """Refinement order: every block of p inside a block of q."""
    _check_same(p, q)
    lab = q.labels()
    return all(len({lab[x - p.base] for x in b}) == 1 for b in p.blocks)


def set_join(p: Partition, q: Partition) -> Partition:
    """Join in the lattice of all set partitions (union-find merge)."""
    _check_same(p, q)
    parent = list(range(p.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in (p, q):
        for b in part.blocks:
            r = find(b[0] - p.base)
            for x in b[1:]:
                s = find(x - p.base)
                if s != r:
                    parent[s] = r
    return Partition.from_labels([find(i) for i in range(p.n)], base=p.base)


def nc_closure(p: Partition) -> Partition:
    """Smallest noncrossing partition above p: merge crossing blocks until none cross."""
    blocks = [list(b) for b in p.blocks]
    changed = True
    while changed:
        changed = False
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                if _crosses(blocks[i], blocks[j]):
                    blocks[i] = sorted(blocks[i] + blocks[j])
                    del blocks[j]
                    changed = True
                    break
            if changed:
                break
    return Partition.from_blocks(blocks, n=p.n, base=p.base)


def nc_join(p: Partition, q: Partition) -> Partition:
    """Join in the lattice NC(n)."""
    if not (is_noncrossing(p) and is_noncrossing(q)):
        raise ValueError("nc_join needs noncrossing arguments")
    return nc_closure(set_join(p, q))


def joins_to_one(p: Partition, rho: Partition) -> bool:
    """Whether ``nc_join(p, rho)`` is the one-block partition.

    Decided by block-overlap connectivity; the crossing closure is only
    built when the overlap graph is disconnected.
    """
    if not (is_noncrossing(p) and is_noncrossing(rho)):
        raise ValueError("joins_to_one needs noncrossing arguments")
    sigma = set_join(p, rho)
    if len(sigma) <= 1:
        return True
    return len(nc_closure(sigma)) == 1


def _require_nc(p: Partition):
    if not is_noncrossing(p):
        raise ValueError(f"{p} is crossing")


def kreweras_right(p: Partition) -> Partition:
    """Right complement on the interlaced order 1 < 1' < 2 < 2' < ..."""
    _require_nc(p)
    if p.n == 0:
        return p
    return Partition.from_labels(kernels.kreweras_right_labels(p.labels()), base=p.base)


def kreweras_left(p: Partition) -> Partition:
    """Left complement on the interlaced order 1' < 1 < 2' < 2 < ..."""
    _require_nc(p)
    if p.n == 0:
        return p
    return Partition.from_labels(kernels.kreweras_left_labels(p.labels()), base=p.base)


def kreweras_extended(p: Partition) -> Partition:
    """Extended complement on {0..n}: label 0 joined to the block of n in the right complement."""
    _require_nc(p)
    if p.n == 0:
        return Partition(1, ((0,),), base=0)
    right = kreweras_right(p)
    blocks = [list(b) for b in right.blocks if p.n not in b]
    blocks.append([0] + list(right.block_of(p.n)))
    return Partition.from_blocks(blocks, n=p.n + 1, base=0)


def ker(word: Sequence[int]) -> Partition:
    """Kernel of a word: positions k, l share a block iff the letters agree."""
    if not word:
        raise ValueError("empty word")
    return Partition.from_labels(list(word))


def interval_partition(sizes: Sequence[int]) -> Partition:
    blocks, start = [], 1
    for s in sizes:
        if s < 1:
            raise ValueError("interval sizes must be positive")
        blocks.append(tuple(range(start, start + s)))
        start += s
    return Partition(start - 1, tuple(blocks))


def onetwo(r: int) -> Partition:
    """{{1,2},{3,4},...,{2r-1,2r}}."""
    return interval_partition([2] * r)


def pispecial(r: int) -> Partition:
    """{{1,2r},{2,3},...,{2r-2,2r-1}}."""
    if r < 1:
        raise ValueError("r must be positive")
    if r == 1:
        return one(2)
    return Partition.from_blocks([(1, 2 * r)] + [(2 * i, 2 * i + 1) for i in range(1, r)])


def blow_up(p: Partition) -> Partition:
    """Image of p in NC(r) under the isomorphism onto [pispecial(r), 1]: element k
    becomes the pair {2k, 2k+1}, with 2r+1 read as 1."""
    r = p.n
    pair = {k: (2 * k, 2 * k + 1 if k < r else 1) for k in range(1, r + 1)}
    return Partition.from_blocks([[x for k in b for x in pair[k]] for b in p.blocks], n=2 * r)


def collapse(pi_hat: Partition) -> Partition:
    """Inverse of :func:`blow_up`; fails unless pi_hat >= pispecial(r)."""
    if pi_hat.n % 2 or pi_hat.n == 0:
        raise ValueError("need a partition of an even number of points")
    r = pi_hat.n // 2
    if not (is_noncrossing(pi_hat) and leq(pispecial(r), pi_hat)):
        raise ValueError(f"{pi_hat} is not in the interval [pispecial({r}), 1]")
    return Partition.from_blocks([[x // 2 for x in b if x % 2 == 0] for b in pi_hat.blocks], n=r)
