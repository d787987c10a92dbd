"""Pure-Python implementations of the partition kernels.

Same API as the compiled ``_ckernels`` module; used when the extension
is not built or when ``FREECHI_PURE=1`` is set.

Partitions are passed around as label tuples: position ``p`` carries the
index of its block, blocks numbered by first appearance (restricted
growth form).
"""

from __future__ import annotations

from collections import Counter


def iter_nc_labels(n):
    """Yield the label tuple of every noncrossing partition of ``n`` points."""
    if n == 0:
        yield ()
        return
    labels = [0] * n

    def rec(p, stack, nblocks):
        if p == n:
            yield tuple(labels)
            return
        labels[p] = nblocks
        yield from rec(p + 1, stack + [nblocks], nblocks + 1)
        # joining an open block closes every block opened above it
        for d in range(len(stack) - 1, -1, -1):
            labels[p] = stack[d]
            yield from rec(p + 1, stack[: d + 1], nblocks)

    yield from rec(0, [], 0)


def _crossing_merge_is_one(comp, L):
    """True when the noncrossing closure of the position labelling ``comp`` is one block."""
    comp = list(comp)
    while True:
        ids = sorted(set(comp))
        if len(ids) == 1:
            return True
        merged = False
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                u, v = ids[a], ids[b]
                last = -1
                runs = 0
                for x in comp:
                    if x == u or x == v:
                        if x != last:
                            runs += 1
                            last = x
                if runs >= 4:
                    comp = [u if x == v else x for x in comp]
                    merged = True
                    break
            if merged:
                break
        if not merged:
            return False


def joins_interval_to_one(labels, nblocks, rho_sizes):
    """Whether the NC-join of the partition ``labels`` with the interval partition is 1."""
    parent = list(range(nblocks))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pos = 0
    for size in rho_sizes:
        first = find(labels[pos])
        for q in range(pos + 1, pos + size):
            other = find(labels[q])
            if other != first:
                parent[other] = first
        pos += size
    comp = [find(x) for x in labels]
    if len(set(comp)) == 1:
        return True
    return _crossing_merge_is_one(comp, len(labels))


def colored_nc_profile(colors, rho_sizes=None, forbidden=()):
    """Count noncrossing partitions whose blocks are monochromatic.

    ``colors`` assigns a colour to each position; a block may only contain
    positions of one colour (the ``pi <= ker`` filter, applied while
    generating). Optional filters: ``rho_sizes`` keeps partitions whose join
    with that interval partition is the one-block partition; ``forbidden``
    is a collection of position bitmasks that may not occur as blocks.

    Returns a Counter mapping the sorted tuple of ``(colour, block size)``
    pairs to the number of partitions with that block profile.
    """
    L = len(colors)
    profile = Counter()
    if L == 0:
        profile[()] += 1
        return profile
    forbidden = frozenset(forbidden)
    labels = [0] * L
    bcolor = []
    bsize = []
    bmask = []

    def leaf():
        if forbidden and any(m in forbidden for m in bmask):
            return
        if rho_sizes is not None and not joins_interval_to_one(labels, len(bsize), rho_sizes):
            return
        profile[tuple(sorted(zip(bcolor, bsize)))] += 1

    def rec(p, stack):
        if p == L:
            leaf()
            return
        c = colors[p]
        bit = 1 << p
        b = len(bsize)
        labels[p] = b
        bcolor.append(c)
        bsize.append(1)
        bmask.append(bit)
        rec(p + 1, stack + [b])
        bcolor.pop()
        bsize.pop()
        bmask.pop()
        for d in range(len(stack) - 1, -1, -1):
            b = stack[d]
            if bcolor[b] != c:
                continue
            labels[p] = b
            bsize[b] += 1
            bmask[b] |= bit
            rec(p + 1, stack[: d + 1])
            bsize[b] -= 1
            bmask[b] ^= bit

    rec(0, [])
    return profile


def _block_perm(labels):
    n = len(labels)
    nxt = [0] * n
    members = {}
    for i, b in enumerate(labels):
        members.setdefault(b, []).append(i)
    for elems in members.values():
        for j, x in enumerate(elems):
            nxt[x] = elems[(j + 1) % len(elems)]
    return nxt


def _cycles_to_labels(perm):
    n = len(perm)
    out = [-1] * n
    nb = 0
    for start in range(n):
        if out[start] >= 0:
            continue
        x = start
        while out[x] < 0:
            out[x] = nb
            x = perm[x]
        nb += 1
    return tuple(out)


def kreweras_right_labels(labels):
    """Right complement: cycles of ``P^{-1} o gamma`` (gamma the long cycle)."""
    n = len(labels)
    nxt = _block_perm(labels)
    inv = [0] * n
    for i, j in enumerate(nxt):
        inv[j] = i
    return _cycles_to_labels([inv[(x + 1) % n] for x in range(n)])


def kreweras_left_labels(labels):
    """Left complement: cycles of ``gamma o P^{-1}``."""
    n = len(labels)
    nxt = _block_perm(labels)
    inv = [0] * n
    for i, j in enumerate(nxt):
        inv[j] = i
    return _cycles_to_labels([(inv[x] + 1) % n for x in range(n)])


def nc_kreweras_profile(n):
    """Counter of (sorted block sizes of pi, sorted block sizes of Krew_r pi) over NC(n)."""
    out = Counter()
    for labels in iter_nc_labels(n):
        k = kreweras_right_labels(labels)
        out[(tuple(sorted(Counter(labels).values())), tuple(sorted(Counter(k).values())))] += 1
    return out
