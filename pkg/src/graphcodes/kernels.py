"""Hot inner loops over bit-packed GF(2) data.

Every kernel exists twice: a loop version compiled with numba (``*_jit``)
and a vectorized numpy version (``*_np``). The public names at the bottom
dispatch on :data:`graphcodes._accel.JIT_ENABLED`.

Packing: a row of ``ncols`` bits is ``ceil(ncols / 64)`` ``uint64`` words;
column ``c`` is bit ``c % 64`` of word ``c // 64``.
"""

import numpy as np

from ._accel import JIT_ENABLED, njit

_U64 = np.uint64
_M1 = _U64(0xBF58476D1CE4E5B9)
_M2 = _U64(0x94D049BB133111EB)
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_ROW_MULT = _U64(0xD1B54A32D192ED03)
_COL_MULT = _U64(0x8CB92BA72F3D8DD7)


def nwords(ncols):
    return (ncols + 63) >> 6


# ----------------------------------------------------------------------------
# counter-based hashing (splitmix64 finalizer)


@njit(cache=True, inline="always")
def _mix64_jit(z):
    z = (z ^ (z >> _U64(30))) * _M1
    z = (z ^ (z >> _U64(27))) * _M2
    return z ^ (z >> _U64(31))


def _mix64_np(z):
    z = (z ^ (z >> _U64(30))) * _M1
    z = (z ^ (z >> _U64(27))) * _M2
    return z ^ (z >> _U64(31))


def seed_key(seed):
    """Scramble a 64-bit seed into the hash key shared by both backends."""
    with np.errstate(over="ignore"):
        return _mix64_np(_U64(int(seed) % (1 << 64)) + _GOLDEN)


def bernoulli_threshold(q):
    # entry is 1 iff (hash >> 11) < threshold; q == 1 gives 2**53, i.e. always
    return _U64(int(np.floor(q * 2.0**53)))


@njit(cache=True, nogil=True)
def _bernoulli_bits_jit(key, row0, nrows, ncols, threshold):
    out = np.zeros((nrows, ncols), dtype=np.uint8)
    for i in range(nrows):
        rk = _mix64_jit(key + _U64(row0 + i) * _ROW_MULT)
        for j in range(ncols):
            v = _mix64_jit(rk ^ (_U64(j) * _COL_MULT))
            if (v >> _U64(11)) < threshold:
                out[i, j] = 1
    return out


def _bernoulli_bits_np(key, row0, nrows, ncols, threshold):
    with np.errstate(over="ignore"):
        rows = np.arange(row0, row0 + nrows, dtype=np.uint64)
        rk = _mix64_np(key + rows * _ROW_MULT)
        cols = np.arange(ncols, dtype=np.uint64) * _COL_MULT
        v = _mix64_np(rk[:, None] ^ cols[None, :])
    return ((v >> _U64(11)) < threshold).astype(np.uint8)


# ----------------------------------------------------------------------------
# popcount


@njit(cache=True, inline="always")
def _popcount64_jit(x):
    x = x - ((x >> _U64(1)) & _U64(0x5555555555555555))
    x = (x & _U64(0x3333333333333333)) + ((x >> _U64(2)) & _U64(0x3333333333333333))
    x = (x + (x >> _U64(4))) & _U64(0x0F0F0F0F0F0F0F0F)
    return (x * _U64(0x0101010101010101)) >> _U64(56)


def popcount_rows(words):
    """Number of set bits in each row of a packed array (last axis summed)."""
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


# ----------------------------------------------------------------------------
# Gaussian elimination


@njit(cache=True, nogil=True)
def _eliminate_jit(R, T, ncols, full):
    m = R.shape[0]
    nw = R.shape[1]
    tw = T.shape[1]
    pivots = np.empty(min(m, ncols), dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        w = c >> 6
        b = _U64(1) << _U64(c & 63)
        p = -1
        for i in range(r, m):
            if R[i, w] & b:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(w, nw):
                tmp = R[r, k]
                R[r, k] = R[p, k]
                R[p, k] = tmp
            for k in range(tw):
                tmp = T[r, k]
                T[r, k] = T[p, k]
                T[p, k] = tmp
        start = 0 if full else r + 1
        for i in range(start, m):
            if i != r and (R[i, w] & b):
                # row r is zero left of column c
                for k in range(w, nw):
                    R[i, k] ^= R[r, k]
                for k in range(tw):
                    T[i, k] ^= T[r, k]
        pivots[r] = c
        r += 1
    return pivots[:r].copy()


def _eliminate_np(R, T, ncols, full):
    m = R.shape[0]
    track = T.shape[1] > 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        w = c >> 6
        sh = _U64(c & 63)
        hits = np.flatnonzero((R[r:, w] >> sh) & _U64(1))
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
            if track:
                T[[r, p]] = T[[p, r]]
        lo = 0 if full else r + 1
        sel = lo + np.flatnonzero((R[lo:, w] >> sh) & _U64(1))
        sel = sel[sel != r]
        if sel.size:
            R[sel, w:] ^= R[r, w:]
            if track:
                T[sel] ^= T[r]
        pivots.append(c)
        r += 1
    return np.asarray(pivots, dtype=np.int64)


# ----------------------------------------------------------------------------
# matrix product


@njit(cache=True, nogil=True)
def _matmul_jit(L, lcols, Rw):
    m = L.shape[0]
    out = np.zeros((m, Rw.shape[1]), dtype=np.uint64)
    for i in range(m):
        for c in range(lcols):
            if (L[i, c >> 6] >> _U64(c & 63)) & _U64(1):
                for k in range(Rw.shape[1]):
                    out[i, k] ^= Rw[c, k]
    return out


def _unpack(words, ncols):
    b = np.unpackbits(np.ascontiguousarray(words).view(np.uint8), axis=-1, bitorder="little")
    return b[..., :ncols]


def _pack(bits):
    bits = np.asarray(bits, dtype=np.uint8)
    ncols = bits.shape[-1]
    pad = nwords(ncols) * 64 - ncols
    if pad:
        bits = np.concatenate([bits, np.zeros(bits.shape[:-1] + (pad,), np.uint8)], axis=-1)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False)


def _matmul_np(L, lcols, Rw):
    # float64 BLAS is exact here: partial sums never exceed lcols < 2**53
    a = _unpack(L, lcols).astype(np.float64)
    rcols = Rw.shape[1] * 64
    b = _unpack(Rw, rcols).astype(np.float64)
    prod = (a @ b).astype(np.int64) & 1
    return _pack(prod.astype(np.uint8))


# ----------------------------------------------------------------------------
# minimum nonzero weight over a span (Gray-code enumeration)


@njit(cache=True, nogil=True)
def _span_min_weight_jit(B):
    k = B.shape[0]
    nw = B.shape[1]
    cur = np.zeros(nw, dtype=np.uint64)
    best = -1
    for g in range(1, 1 << k):
        # flip basis vector at the lowest set bit of g
        t = 0
        while not (g >> t) & 1:
            t += 1
        wt = 0
        for q in range(nw):
            cur[q] ^= B[t, q]
            wt += _popcount64_jit(cur[q])
        if wt > 0 and (best < 0 or wt < best):
            best = wt
    return best


_TABLE_BITS = 14


def _span_min_weight_np(B):
    k = B.shape[0]
    lo = min(k, _TABLE_BITS)
    table = np.zeros((1, B.shape[1]), dtype=np.uint64)
    for t in range(lo):
        table = np.concatenate([table, table ^ B[t]], axis=0)
    wts = popcount_rows(table[1:])
    wts = wts[wts > 0]
    best = int(wts.min()) if wts.size else -1
    high = B[lo:]
    offset = np.zeros(B.shape[1], dtype=np.uint64)
    for h in range(1, 1 << (k - lo)):
        offset ^= high[(h & -h).bit_length() - 1]
        wts = popcount_rows(table ^ offset)
        wts = wts[wts > 0]
        if wts.size:
            cand = int(wts.min())
            if best < 0 or cand < best:
                best = cand
    return best


# ----------------------------------------------------------------------------
# dispatch

if JIT_ENABLED:
    bernoulli_bits = _bernoulli_bits_jit
    eliminate = _eliminate_jit
    matmul_words = _matmul_jit
    span_min_weight = _span_min_weight_jit
else:
    bernoulli_bits = _bernoulli_bits_np
    eliminate = _eliminate_np
    matmul_words = _matmul_np
    span_min_weight = _span_min_weight_np

BACKEND = "numba" if JIT_ENABLED else "numpy"

pack_bits = _pack
unpack_bits = _unpack
