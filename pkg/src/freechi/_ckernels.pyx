# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled partition kernels; drop-in replacement for ``_pykernels``."""

from collections import Counter

cdef enum:
    MAXN = 63


cdef class _NCIter:
    cdef int n
    cdef int p
    cdef int labels[MAXN]
    cdef int stk[MAXN + 1][MAXN]
    cdef int sl[MAXN + 1]
    cdef int nbk[MAXN + 1]
    cdef int ch[MAXN + 1]
    cdef bint done
    cdef bint empty_pending

    def __cinit__(self, int n):
        if n < 0 or n > MAXN:
            raise ValueError("n out of kernel range")
        self.n = n
        self.p = 0
        self.sl[0] = 0
        self.nbk[0] = 0
        self.ch[0] = 0
        self.done = False
        self.empty_pending = n == 0

    def __iter__(self):
        return self

    def __next__(self):
        cdef int p, c, d, i, n = self.n
        if self.empty_pending:
            self.empty_pending = False
            self.done = True
            return ()
        if self.done:
            raise StopIteration
        p = self.p
        while p >= 0:
            if p == n:
                self.p = p - 1
                return tuple([self.labels[i] for i in range(n)])
            c = self.ch[p]
            if c > self.sl[p]:
                self.ch[p] = 0
                p -= 1
                continue
            self.ch[p] = c + 1
            if c == 0:
                self.labels[p] = self.nbk[p]
                for i in range(self.sl[p]):
                    self.stk[p + 1][i] = self.stk[p][i]
                self.stk[p + 1][self.sl[p]] = self.nbk[p]
                self.sl[p + 1] = self.sl[p] + 1
                self.nbk[p + 1] = self.nbk[p] + 1
            else:
                d = self.sl[p] - c
                self.labels[p] = self.stk[p][d]
                for i in range(d + 1):
                    self.stk[p + 1][i] = self.stk[p][i]
                self.sl[p + 1] = d + 1
                self.nbk[p + 1] = self.nbk[p]
            p += 1
            if p < n:
                self.ch[p] = 0
        self.done = True
        raise StopIteration


def iter_nc_labels(int n):
    """Yield the label tuple of every noncrossing partition of ``n`` points."""
    return _NCIter(n)


cdef bint _closure_is_one(int* comp, int L):
    cdef int ids[MAXN]
    cdef int nid, i, a, b, u, v, last, runs, x
    cdef bint merged, seen
    while True:
        nid = 0
        for i in range(L):
            seen = False
            for a in range(nid):
                if ids[a] == comp[i]:
                    seen = True
                    break
            if not seen:
                ids[nid] = comp[i]
                nid += 1
        if nid == 1:
            return True
        merged = False
        for a in range(nid):
            for b in range(a + 1, nid):
                u = ids[a]
                v = ids[b]
                last = -1
                runs = 0
                for i in range(L):
                    x = comp[i]
                    if x == u or x == v:
                        if x != last:
                            runs += 1
                            last = x
                if runs >= 4:
                    for i in range(L):
                        if comp[i] == v:
                            comp[i] = u
                    merged = True
                    break
            if merged:
                break
        if not merged:
            return False


cdef int _find(int* parent, int x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef bint _joins_c(int* labels, int L, int nblocks, int* rho, int nrho):
    cdef int parent[MAXN]
    cdef int comp[MAXN]
    cdef int i, j, pos, first, other, size
    for i in range(nblocks):
        parent[i] = i
    pos = 0
    for j in range(nrho):
        size = rho[j]
        first = _find(parent, labels[pos])
        for i in range(pos + 1, pos + size):
            other = _find(parent, labels[i])
            if other != first:
                parent[other] = first
        pos += size
    for i in range(L):
        comp[i] = _find(parent, labels[i])
    return _closure_is_one(comp, L)


def joins_interval_to_one(labels, int nblocks, rho_sizes):
    """Whether the NC-join of the partition ``labels`` with the interval partition is 1."""
    cdef int lab[MAXN]
    cdef int rho[MAXN]
    cdef int L = len(labels), i
    for i in range(L):
        lab[i] = labels[i]
    for i in range(len(rho_sizes)):
        rho[i] = rho_sizes[i]
    return _joins_c(lab, L, nblocks, rho, len(rho_sizes))


cdef class _Profiler:
    cdef int L
    cdef int colors[MAXN]
    cdef int labels[MAXN]
    cdef int bcolor[MAXN]
    cdef int bsize[MAXN]
    cdef unsigned long long bmask[MAXN]
    cdef int nb
    cdef int use_rho
    cdef int rho[MAXN]
    cdef int nrho
    cdef unsigned long long forb[256]
    cdef int nforb
    cdef object forb_set
    cdef dict profile

    cdef void leaf(self):
        cdef int i, j, k
        cdef object key
        if self.nforb > 0:
            if self.nforb <= 256:
                for i in range(self.nb):
                    for j in range(self.nforb):
                        if self.bmask[i] == self.forb[j]:
                            return
            else:
                for i in range(self.nb):
                    if self.bmask[i] in self.forb_set:
                        return
        if self.use_rho and not _joins_c(self.labels, self.L, self.nb, self.rho, self.nrho):
            return
        key = tuple(sorted([(self.bcolor[i], self.bsize[i]) for i in range(self.nb)]))
        self.profile[key] = self.profile.get(key, 0) + 1

    cdef void rec(self, int p, int* stack, int sl):
        cdef int nstack[MAXN]
        cdef int c, b, d, i
        cdef unsigned long long bit
        if p == self.L:
            self.leaf()
            return
        c = self.colors[p]
        bit = (<unsigned long long>1) << p
        b = self.nb
        self.labels[p] = b
        self.bcolor[b] = c
        self.bsize[b] = 1
        self.bmask[b] = bit
        self.nb += 1
        for i in range(sl):
            nstack[i] = stack[i]
        nstack[sl] = b
        self.rec(p + 1, nstack, sl + 1)
        self.nb -= 1
        for d in range(sl - 1, -1, -1):
            b = stack[d]
            if self.bcolor[b] != c:
                continue
            self.labels[p] = b
            self.bsize[b] += 1
            self.bmask[b] |= bit
            self.rec(p + 1, stack, d + 1)
            self.bsize[b] -= 1
            self.bmask[b] ^= bit


def colored_nc_profile(colors, rho_sizes=None, forbidden=()):
    """Count noncrossing partitions whose blocks are monochromatic.

    See ``_pykernels.colored_nc_profile`` for the contract.
    """
    cdef _Profiler st = _Profiler()
    cdef int stack[MAXN]
    cdef int i
    st.L = len(colors)
    if st.L > MAXN:
        raise ValueError("word too long for kernel")
    profile = Counter()
    if st.L == 0:
        profile[()] += 1
        return profile
    for i in range(st.L):
        st.colors[i] = colors[i]
    st.nb = 0
    st.use_rho = rho_sizes is not None
    st.nrho = 0
    if rho_sizes is not None:
        st.nrho = len(rho_sizes)
        for i in range(st.nrho):
            st.rho[i] = rho_sizes[i]
    forbidden = list(forbidden)
    st.nforb = len(forbidden)
    st.forb_set = frozenset(forbidden)
    if st.nforb <= 256:
        for i in range(st.nforb):
            st.forb[i] = forbidden[i]
    st.profile = {}
    st.rec(0, stack, 0)
    profile.update(st.profile)
    return profile


cdef tuple _labels_from_perm(int* perm, int n):
    cdef int out[MAXN]
    cdef int i, x, nb = 0
    for i in range(n):
        out[i] = -1
    for i in range(n):
        if out[i] >= 0:
            continue
        x = i
        while out[x] < 0:
            out[x] = nb
            x = perm[x]
        nb += 1
    return tuple([out[i] for i in range(n)])


cdef void _block_inverse(labels, int n, int* inv):
    # inv[j] = predecessor of j within its block (cyclically)
    cdef int last[MAXN]
    cdef int first[MAXN]
    cdef int i, b
    for i in range(n):
        last[i] = -1
        first[i] = -1
    for i in range(n):
        b = labels[i]
        if last[b] < 0:
            first[b] = i
        else:
            inv[i] = last[b]
        last[b] = i
    for b in range(n):
        if first[b] >= 0:
            inv[first[b]] = last[b]


def kreweras_right_labels(labels):
    """Right complement: cycles of ``P^{-1} o gamma`` (gamma the long cycle)."""
    cdef int n = len(labels), x
    cdef int inv[MAXN]
    cdef int perm[MAXN]
    _block_inverse(labels, n, inv)
    for x in range(n):
        perm[x] = inv[(x + 1) % n]
    return _labels_from_perm(perm, n)


def kreweras_left_labels(labels):
    """Left complement: cycles of ``gamma o P^{-1}``."""
    cdef int n = len(labels), x
    cdef int inv[MAXN]
    cdef int perm[MAXN]
    _block_inverse(labels, n, inv)
    for x in range(n):
        perm[x] = (inv[x] + 1) % n
    return _labels_from_perm(perm, n)


def nc_kreweras_profile(int n):
    """Counter of (sorted block sizes of pi, sorted block sizes of Krew_r pi) over NC(n)."""
    out = {}
    for labels in _NCIter(n):
        k = kreweras_right_labels(labels)
        key = (tuple(sorted(Counter(labels).values())), tuple(sorted(Counter(k).values())))
        out[key] = out.get(key, 0) + 1
    return Counter(out)
