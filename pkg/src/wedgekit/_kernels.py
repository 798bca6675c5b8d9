"""Hot loops for vertex enumeration and adjacency.

Two interchangeable backends produce identical outputs:

* ``numba``: depth-first scan over facet subsets with incremental rank
  pruning, compiled with ``@njit``.
* ``numpy``: batched evaluation of every subset, no compiler needed.

``WEDGEKIT_KERNELS=numpy`` forces the fallback; otherwise numba is used when
importable.  Neither backend is trusted for exactness: rank decisions are
made modulo two large primes (dependence over Q implies dependence mod p, so
a subset is only discarded when every prime agrees), and feasibility is a
tolerant float filter.  Every candidate is re-verified in exact arithmetic
by the caller.
"""

from __future__ import annotations

import itertools
import os
from math import comb

import numpy as np

PRIMES = (2147483647, 2147483629)
FEAS_TOL = 1e-9
PIVOT_TOL = 1e-13

try:  # pragma: no cover - exercised implicitly
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def backend() -> str:
    choice = os.environ.get("WEDGEKIT_KERNELS", "").strip().lower()
    if choice == "numpy" or not HAVE_NUMBA:
        return "numpy"
    if choice not in ("", "numba"):
        raise ValueError(f"unknown WEDGEKIT_KERNELS value {choice!r}")
    return "numba"


def mod_rows(int_rows: list[list[int]], p: int) -> np.ndarray:
    return np.array([[x % p for x in row] for row in int_rows], dtype=np.int64).reshape(len(int_rows), -1)


def float_rows(rows) -> np.ndarray:
    """Rows as floats, each scaled to max-abs 1 (solutions are unchanged)."""
    F = np.array([[float(x) for x in r] for r in rows], dtype=np.float64).reshape(len(rows), -1)
    scale = np.abs(F).max(axis=1, keepdims=True)
    scale[scale == 0] = 1.0
    return F / scale


# ---------------------------------------------------------------------------
# shared float leaf evaluation (pure python/numpy form for the fallback)


def _feasible_mask(F: np.ndarray, X: np.ndarray) -> np.ndarray:
    terms = X @ F[:, 1:].T
    s = F[:, 0][None, :] + terms
    mag = np.abs(F[:, 0])[None, :] + np.abs(X) @ np.abs(F[:, 1:]).T
    return np.all(s >= -FEAS_TOL * mag, axis=1)


def _batched_modp_nonsingular(M: np.ndarray, p: int) -> np.ndarray:
    M = M.copy() % p
    B, d, _ = M.shape
    ok = np.ones(B, dtype=bool)
    ar = np.arange(B)
    for c in range(d):
        nz = M[:, c:, c] != 0
        has = nz.any(axis=1)
        ok &= has
        piv = c + np.argmax(nz, axis=1)
        rows_c = M[ar, c, :].copy()
        M[ar, c, :] = M[ar, piv, :]
        M[ar, piv, :] = rows_c
        a = M[:, c, c]
        inv = np.ones(B, dtype=np.int64)
        base = a.copy()
        e = p - 2
        while e:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        inv[~has] = 0
        prow = (M[:, c, :] * inv[:, None]) % p
        for r in range(c + 1, d):
            f = M[:, r, c]
            M[:, r, :] = (M[:, r, :] - (f[:, None] * prow) % p) % p
    return ok


def _scan_numpy(P1, P2, F, d, chunk=200_000):
    n = F.shape[0]
    idx_out, x_out, flag_out = [], [], []
    it = itertools.combinations(range(n), d)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            break
        S = np.array(block, dtype=np.int64).reshape(len(block), d)
        ok = _batched_modp_nonsingular(P1[S][:, :, 1:], PRIMES[0])
        ok |= _batched_modp_nonsingular(P2[S][:, :, 1:], PRIMES[1])
        S = S[ok]
        if not len(S):
            continue
        A = F[S][:, :, 1:]
        b = -F[S][:, :, 0]
        X = np.full((len(S), d), np.nan)
        bad = np.zeros(len(S), dtype=bool)
        try:
            X = np.linalg.solve(A, b[..., None])[..., 0]
        except np.linalg.LinAlgError:
            for k in range(len(S)):
                try:
                    X[k] = np.linalg.solve(A[k], b[k])
                except np.linalg.LinAlgError:
                    bad[k] = True
        good = ~bad & np.all(np.isfinite(X), axis=1)
        bad = ~good
        if good.any():
            r = b[good] - np.einsum("kij,kj->ki", A[good], X[good])
            X[good] += np.linalg.solve(A[good], r[..., None])[..., 0]
        keep = bad.copy()
        if good.any():
            keep[good] = _feasible_mask(F, X[good])
        idx_out.append(S[keep])
        x_out.append(np.where(bad[keep, None], np.nan, X[keep]))
        flag_out.append(bad[keep])
    if not idx_out:
        return np.zeros((0, d), np.int64), np.zeros((0, d)), np.zeros(0, bool)
    return np.concatenate(idx_out), np.concatenate(x_out), np.concatenate(flag_out)


# ---------------------------------------------------------------------------
# numba backend

if HAVE_NUMBA:

    @njit(cache=True)
    def _modinv(a, p):
        r = 1
        b = a % p
        e = p - 2
        while e > 0:
            if e & 1:
                r = (r * b) % p
            b = (b * b) % p
            e >>= 1
        return r

    @njit(cache=True)
    def _try_add(M, row, depth, basis, piv, p):
        """Reduce ``M[row, 1:]`` against the basis; append if independent."""
        m = M.shape[1] - 1
        vec = np.empty(m, dtype=np.int64)
        for j in range(m):
            vec[j] = M[row, j + 1]
        for k in range(depth):
            c = piv[k]
            f = vec[c]
            if f != 0:
                for j in range(m):
                    vec[j] = (vec[j] - f * basis[k, j]) % p
        c = -1
        for j in range(m):
            if vec[j] != 0:
                c = j
                break
        if c < 0:
            return False
        inv = _modinv(vec[c], p)
        for j in range(m):
            basis[depth, j] = (vec[j] * inv) % p
        piv[depth] = c
        return True

    @njit(cache=True)
    def _leaf(F, S, d, x, tol, ptol):
        """Float solve of the d x d affine system with one refinement step.

        Returns 1 if feasible within tolerance, 0 if infeasible, 2 if the
        float system is numerically singular (caller decides exactly).
        """
        n = F.shape[0]
        A = np.empty((d, d))
        b = np.empty(d)
        for i in range(d):
            for j in range(d):
                A[i, j] = F[S[i], j + 1]
            b[i] = -F[S[i], 0]
        LU = A.copy()
        perm = np.arange(d)
        for c in range(d):
            best = c
            bv = abs(LU[c, c])
            for r in range(c + 1, d):
                if abs(LU[r, c]) > bv:
                    bv = abs(LU[r, c])
                    best = r
            if bv < ptol:
                return 2
            if best != c:
                for j in range(d):
                    t = LU[c, j]
                    LU[c, j] = LU[best, j]
                    LU[best, j] = t
                t2 = perm[c]
                perm[c] = perm[best]
                perm[best] = t2
            for r in range(c + 1, d):
                f = LU[r, c] / LU[c, c]
                LU[r, c] = f
                for j in range(c + 1, d):
                    LU[r, j] -= f * LU[c, j]
        for it in range(2):
            if it == 0:
                rhs = b.copy()
            else:
                rhs = np.empty(d)
                for i in range(d):
                    s = b[i]
                    for j in range(d):
                        s -= A[i, j] * x[j]
                    rhs[i] = s
            y = np.empty(d)
            for i in range(d):
                s = rhs[perm[i]]
                for j in range(i):
                    s -= LU[i, j] * y[j]
                y[i] = s
            for i in range(d - 1, -1, -1):
                s = y[i]
                for j in range(i + 1, d):
                    s -= LU[i, j] * y[j]
                y[i] = s / LU[i, i]
            if it == 0:
                for i in range(d):
                    x[i] = y[i]
            else:
                for i in range(d):
                    x[i] += y[i]
        for i in range(n):
            s = F[i, 0]
            mag = abs(F[i, 0])
            for j in range(d):
                t = F[i, j + 1] * x[j]
                s += t
                mag += abs(t)
            if s < -tol * mag:
                return 0
        return 1

    @njit(cache=True)
    def _scan_numba(P1, P2, F, d, cap, out_idx, out_x, out_flag, p1, p2, tol, ptol):
        n = F.shape[0]
        m = F.shape[1] - 1
        B1 = np.zeros((d, m), dtype=np.int64)
        B2 = np.zeros((d, m), dtype=np.int64)
        piv1 = np.zeros(d, dtype=np.int64)
        piv2 = np.zeros(d, dtype=np.int64)
        # valid[k, depth]: prime k's basis holds `depth` independent rows
        valid = np.zeros((2, d + 1), dtype=np.bool_)
        valid[0, 0] = True
        valid[1, 0] = True
        S = np.zeros(d, dtype=np.int64)
        x = np.zeros(d)
        count = 0
        depth = 0
        S[0] = -1
        while depth >= 0:
            S[depth] += 1
            if S[depth] > n - d + depth:
                depth -= 1
                continue
            r = S[depth]
            v1 = False
            v2 = False
            if valid[0, depth]:
                v1 = _try_add(P1, r, depth, B1, piv1, p1)
            if valid[1, depth]:
                v2 = _try_add(P2, r, depth, B2, piv2, p2)
            if not (valid[0, depth] or valid[1, depth]):
                v1 = False
                v2 = False
                independent = True
            else:
                independent = v1 or v2
            if not independent:
                continue
            valid[0, depth + 1] = v1
            valid[1, depth + 1] = v2
            if depth + 1 == d:
                st = _leaf(F, S, d, x, tol, ptol)
                if st != 0:
                    if count >= cap:
                        return -1
                    for j in range(d):
                        out_idx[count, j] = S[j]
                        out_x[count, j] = x[j] if st == 1 else np.nan
                    out_flag[count] = st == 2
                    count += 1
                continue
            depth += 1
            S[depth] = S[depth - 1]
        return count

    @njit(cache=True)
    def _popcount(x):
        c = 0
        while x:
            x &= x - np.uint64(1)
            c += 1
        return c

    @njit(cache=True)
    def _adjacency_numba(masks, d, out):
        V = masks.shape[0]
        cnt = 0
        for i in range(V):
            for j in range(i + 1, V):
                c = masks[i] & masks[j]
                if _popcount(c) < d - 1:
                    continue
                ok = True
                for w in range(V):
                    if w != i and w != j and (masks[w] & c) == c:
                        ok = False
                        break
                if ok:
                    if cnt >= out.shape[0]:
                        return -1
                    out[cnt, 0] = i
                    out[cnt, 1] = j
                    cnt += 1
        return cnt


def subset_scan(int_rows: list[list[int]], float_matrix: np.ndarray, d: int, which: str | None = None):
    """Candidate vertex bases of the system.

    Returns ``(subsets, points, unresolved)``: d-subsets of row indices in
    lexicographic order whose affine part is nonsingular and whose float
    solution is feasible within tolerance, the float solutions, and a flag
    marking subsets whose float solve broke down (exact check required).
    """
    which = which or backend()
    n = len(int_rows)
    if d == 0 or n < d:
        return np.zeros((0, d), np.int64), np.zeros((0, d)), np.zeros(0, bool)
    P1 = mod_rows(int_rows, PRIMES[0])
    P2 = mod_rows(int_rows, PRIMES[1])
    F = np.ascontiguousarray(float_matrix, dtype=np.float64)
    if which == "numpy":
        return _scan_numpy(P1, P2, F, d)
    cap = max(1024, min(comb(n, d), 1 << 16))
    while True:
        out_idx = np.zeros((cap, d), dtype=np.int64)
        out_x = np.zeros((cap, d))
        out_flag = np.zeros(cap, dtype=np.bool_)
        cnt = _scan_numba(P1, P2, F, d, cap, out_idx, out_x, out_flag, PRIMES[0], PRIMES[1], FEAS_TOL, PIVOT_TOL)
        if cnt >= 0:
            return out_idx[:cnt], out_x[:cnt], out_flag[:cnt]
        cap *= 4


def _popcount_np(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a)


def adjacency(masks: list[int], d: int, which: str | None = None) -> list[tuple[int, int]]:
    """Pairs (i, j), i < j, whose common facets support a face with exactly two vertices."""
    which = which or backend()
    V = len(masks)
    if V < 2:
        return []
    if max(masks).bit_length() > 64:
        which = "python"
    if which == "python":
        edges = []
        for i in range(V):
            for j in range(i + 1, V):
                c = masks[i] & masks[j]
                if bin(c).count("1") < d - 1:
                    continue
                if all(w in (i, j) or masks[w] & c != c for w in range(V)):
                    edges.append((i, j))
        return edges
    M = np.array(masks, dtype=np.uint64)
    if which == "numpy":
        edges = []
        for i in range(V - 1):
            c = M[i] & M[i + 1 :]
            cand = np.nonzero(_popcount_np(c) >= d - 1)[0]
            if not len(cand):
                continue
            cc = c[cand]
            contains = (M[None, :] & cc[:, None]) == cc[:, None]
            hits = contains.sum(axis=1)
            for k in cand[hits == 2]:
                edges.append((i, i + 1 + int(k)))
        return edges
    cap = max(16, V * (d + 1))
    while True:
        out = np.zeros((cap, 2), dtype=np.int64)
        cnt = _adjacency_numba(M, d, out)
        if cnt >= 0:
            return [(int(a), int(b)) for a, b in out[:cnt]]
        cap *= 4
