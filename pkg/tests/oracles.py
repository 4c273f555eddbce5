"""Slow, independent reference implementations used only by the tests.

Nothing here imports the engine's cube, linalg or homology code; the word
type is the only shared structure.
"""

from itertools import combinations, product
from math import gcd


# -- circles by walking the closure ---------------------------------------------

def _closure_graph(word, labels):
    """Adjacency of the points ``(strand, level)`` once every crossing is smoothed.

    ``labels`` gives "A" or "B" per crossing letter in order.  Level ``L``
    (the bottom) is identified with level 0.
    """
    n = word.strand_count
    L = len(word.letters)
    adj = {}

    def pt(p, lev):
        return (p, lev % L) if L else (p, 0)

    def join(x, y):
        adj.setdefault(x, []).append(y)
        adj.setdefault(y, []).append(x)

    if L == 0:
        return {(p, 0): [] for p in range(n)}
    it = iter(labels)
    for lev, letter in enumerate(word.letters):
        q = letter.index - 1
        for p in range(n):
            if p not in (q, q + 1):
                join(pt(p, lev), pt(p, lev + 1))
        if letter.kind == "crossing":
            lab = next(it)
            vertical = (lab == "A") == (letter.sign > 0)
        else:
            vertical = False
        if vertical:
            join(pt(q, lev), pt(q, lev + 1))
            join(pt(q + 1, lev), pt(q + 1, lev + 1))
        else:
            join(pt(q, lev), pt(q + 1, lev))
            join(pt(q, lev + 1), pt(q + 1, lev + 1))
    return adj


def circles(word, labels):
    """Circles of the smoothing as frozensets of points."""
    adj = _closure_graph(word, labels)
    seen = set()
    out = []
    for start in sorted(adj):
        if start in seen:
            continue
        comp = set()
        stack = [start]
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x])
        seen |= comp
        out.append(frozenset(comp))
    return out


def crossing_count(word):
    return sum(1 for l in word.letters if l.kind == "crossing")


def all_states(word):
    return ["".join(s) for s in product("AB", repeat=crossing_count(word))]


def generator_count(word):
    return sum(2 ** len(circles(word, s)) for s in all_states(word))


# -- polynomials as dicts -----------------------------------------------------------

def pmul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def padd(p, q):
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def bracket_state_sum(word):
    """``sum over states of A^(#A - #B) delta^(circles)``, ``delta = -A^2 - A^-2``."""
    delta = {2: -1, -2: -1}
    total = {}
    for s in all_states(word):
        term = {s.count("A") - s.count("B"): 1}
        for _ in circles(word, s):
            term = pmul(term, delta)
        total = padd(total, term)
    return total


# -- dense Smith normal form with transforms --------------------------------------

def snf_with_transforms(M, nrows, ncols):
    """Return ``(diag, Qinv)`` with ``P M Q`` diagonal and ``Qinv = Q^-1``.

    Textbook elimination on a dense copy: move the smallest entry to the
    pivot, clear its row and column by division with remainder, and repair
    divisibility by adding rows.
    """
    A = [list(row) for row in M]
    Qinv = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    t = 0
    while t < min(nrows, ncols):
        nz = [(abs(A[i][j]), i, j) for i in range(t, nrows) for j in range(t, ncols) if A[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        A[t], A[i0] = A[i0], A[t]
        for row in A:
            row[t], row[j0] = row[j0], row[t]
        Qinv[t], Qinv[j0] = Qinv[j0], Qinv[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                dirty |= A[i][t] != 0
            for j in range(t + 1, ncols):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                    Qinv[t] = [a + q * b for a, b in zip(Qinv[t], Qinv[j])]
                dirty |= A[t][j] != 0
            if dirty:
                cands = [(abs(A[i][t]), i, t) for i in range(t + 1, nrows) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t + 1, ncols) if A[t][j]]
                _, i1, j1 = min(cands)
                A[t], A[i1] = A[i1], A[t]
                for row in A:
                    row[t], row[j1] = row[j1], row[t]
                Qinv[t], Qinv[j1] = Qinv[j1], Qinv[t]
                continue
            bad = [i for i in range(t + 1, nrows)
                   if any(A[i][j] % p for j in range(t + 1, ncols))]
            if bad:
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            break
        t += 1
    diag = [abs(A[i][i]) for i in range(min(nrows, ncols)) if A[i][i]]
    return diag, Qinv


def invariant_factors(M, nrows, ncols):
    """Nonzero invariant factors, each dividing the next."""
    diag, _ = snf_with_transforms(M, nrows, ncols)
    # the loop above already enforces divisibility; sort for safety
    return sorted(diag)


def determinantal_divisors(M):
    """``d_k`` = gcd of all ``k x k`` minors, for small square or rectangular M."""
    nrows, ncols = len(M), len(M[0]) if M else 0
    out = []
    for k in range(1, min(nrows, ncols) + 1):
        g = 0
        for rows in combinations(range(nrows), k):
            for cols in combinations(range(ncols), k):
                g = gcd(g, det([[M[r][c] for c in cols] for r in rows]))
        if g == 0:
            break
        out.append(g)
    return out


def det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * det([row[:j] + row[j + 1:] for row in M[1:]])
               for j in range(n) if M[0][j])


def matmul(A, B, inner):
    ncols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(ncols)]
            for i in range(len(A))]


def homology(d_out, d_in, dim):
    """``ker d_out / im d_in`` from a kernel basis, as ``(free_rank, torsion)``.

    ``d_out`` is ``rows x dim`` and ``d_in`` is ``dim x cols`` (dense lists).
    """
    rows = len(d_out)
    if rows and dim:
        diag, Qinv = snf_with_transforms(d_out, rows, dim)
    else:
        diag, Qinv = [], [[int(i == j) for j in range(dim)] for i in range(dim)]
    r = len(diag)
    cols = len(d_in[0]) if d_in and d_in[0] else 0
    if cols == 0 or dim == r:
        return dim - r, []
    coords = matmul(Qinv, d_in, dim)
    assert all(v == 0 for row in coords[:r] for v in row), "d_out * d_in != 0"
    K = coords[r:]
    diag2, _ = snf_with_transforms(K, dim - r, cols)
    return dim - r - len(diag2), sorted(d for d in diag2 if d > 1)


# -- brute-force Khovanov complex --------------------------------------------------

def khovanov_complex(word):
    """Generators and dense differentials straight from the adjacency definition.

    Returns ``(gens, d)`` where ``gens[(a, b)]`` is a list of
    ``(state, {circle: sign})`` and ``d[(a, b)]`` is the dense matrix
    ``C_{a,b} -> C_{a-2,b}``.
    """
    states = all_states(word)
    circ = {s: circles(word, s) for s in states}
    gens = {}
    for s in states:
        sigma = s.count("A") - s.count("B")
        cs = circ[s]
        for signs in product((1, -1), repeat=len(cs)):
            tau = sum(signs)
            gens.setdefault((sigma, sigma + 2 * tau), []).append((s, dict(zip(cs, signs))))
    d = {}
    for (a, b), src in gens.items():
        tgt = gens.get((a - 2, b), [])
        mat = [[0] * len(src) for _ in tgt]
        for col, (s, es) in enumerate(src):
            for row, (t, et) in enumerate(tgt):
                diff = [k for k in range(len(s)) if s[k] != t[k]]
                if len(diff) != 1 or s[diff[0]] != "A":
                    continue
                common = set(es) & set(et)
                if any(es[c] != et[c] for c in common):
                    continue
                nb = t[diff[0] + 1:].count("B")
                mat[row][col] = (-1) ** nb
        d[(a, b)] = mat
    return gens, d


def complex_homology(gens, d, keep=None):
    """Homology of every bidegree, optionally restricted to generators ``keep(g)``."""
    idx = {bd: [k for k, g in enumerate(gs) if keep is None or keep(g)]
           for bd, gs in gens.items()}
    out = {}
    for (a, b), ks in idx.items():
        dim = len(ks)
        if not dim:
            continue
        lower = idx.get((a - 2, b), [])
        d_out = [[d[(a, b)][r][c] for c in ks] for r in lower]
        upper = idx.get((a + 2, b), [])
        if upper:
            d_in = [[d[(a + 2, b)][r][c] for c in upper] for r in ks]
        else:
            d_in = [[] for _ in ks]
        free, tors = homology(d_out, d_in, dim)
        if free or tors:
            out[(a, b)] = (free, tors)
    return out
