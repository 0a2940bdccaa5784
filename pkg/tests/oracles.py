"""Slow, independent reference implementations used by the tests."""
from __future__ import annotations

import itertools
from fractions import Fraction

from dstiling import invariants as inv
from dstiling.dsym import DelaneySymbol, canonical_trace, graph_trace
from dstiling.records import BOOL_COLUMNS


# ------------------------------------------------------------ enumeration

def involutions(n: int):
    """All involutions of 1..n as tuples (1-based images)."""
    def rec(perm, free):
        if not free:
            yield tuple(perm[1:])
            return
        a = free[0]
        rest = free[1:]
        perm[a] = a
        yield from rec(perm, rest)
        for k, b in enumerate(rest):
            perm[a], perm[b] = b, a
            yield from rec(perm, rest[:k] + rest[k + 1:])
        perm[a] = 0
    yield from rec([0] * (n + 1), list(range(1, n + 1)))


def _connected(ops, n) -> bool:
    seen = {1}
    todo = [1]
    while todo:
        d = todo.pop()
        for op in ops:
            e = op[d - 1]
            if e not in seen:
                seen.add(e)
                todo.append(e)
    return len(seen) == n


def brute_graphs(n: int) -> dict[str, tuple]:
    """Connected Delaney-Dress graphs on n nodes, one per isomorphism class.

    sigma0 is fixed to a standard involution of each cycle type, which loses
    nothing since every graph is isomorphic to one of that form.
    """
    out = {}
    all_inv = list(involutions(n))
    for pairs in range(n // 2 + 1):
        s0 = list(range(1, n + 1))
        for k in range(pairs):
            s0[2 * k], s0[2 * k + 1] = 2 * k + 2, 2 * k + 1
        s0 = tuple(s0)
        for s2 in all_inv:
            if any(s0[s2[d] - 1] != s2[s0[d] - 1] for d in range(n)):
                continue
            for s1 in all_inv:
                ops = (s0, s1, s2)
                if not _connected(ops, n):
                    continue
                probe = DelaneySymbol(ops, [3] * n, [3] * n, validate=False)
                out.setdefault(graph_trace(probe), ops)
    return out


def _orbits(ops, i, j, n):
    seen = set()
    out = []
    for d in range(1, n + 1):
        if d in seen:
            continue
        orb = [d]
        seen.add(d)
        for e in orb:
            for c in (i, j):
                f = ops[c][e - 1]
                if f not in seen:
                    seen.add(f)
                    orb.append(f)
        chain = any(ops[c][e - 1] == e for e in orb for c in (i, j))
        r = len(orb) if chain else len(orb) // 2
        out.append((orb, r, 1 if chain else 2))
    return out


def brute_symbols(n: int, vcap: int = 12) -> set[str]:
    """Canonical traces of all geometry-minimal size-n symbols."""
    found = set()
    for ops in brute_graphs(n).values():
        if any(r not in (1, 2) for _, r, _ in _orbits(ops, 0, 2, n)):
            continue
        comps = _orbits(ops, 0, 1, n) + _orbits(ops, 1, 2, n)
        npair = len(_orbits(ops, 0, 1, n))
        vs = [0] * len(comps)
        vmins = [-(-3 // r) for _, r, _ in comps]

        def rec(k, acc):
            if k == len(comps):
                leaf()
                return
            r, c = comps[k][1], comps[k][2]
            rest = sum(Fraction(cc, vm) for (_, _, cc), vm in zip(comps[k + 1:], vmins[k + 1:]))
            for v in range(vmins[k], vcap + 1):
                vs[k] = v
                rec(k + 1, acc + Fraction(c, v))
                # final curvature is at most this bound; once it is negative and this
                # component is reducible without reaching zero, larger v cannot be minimal
                bound = acc + Fraction(c, v) + rest - Fraction(n, 2)
                if bound < 0 and v >= 2 and (v - 1) * r >= 3 and \
                        bound + Fraction(c, v - 1) - Fraction(c, v) < 0:
                    break

        def leaf():
            m01 = [0] * n
            m12 = [0] * n
            for idx, ((orb, r, _), v) in enumerate(zip(comps, vs)):
                target = m01 if idx < npair else m12
                for d in orb:
                    target[d - 1] = v * r
            s = DelaneySymbol(ops, m01, m12)
            if inv.curvature(s) > 0 and inv.orbifold(s).is_bad():
                return
            if not inv.is_geometry_minimal(s):
                return
            found.add(canonical_trace(s))

        rec(0, Fraction(0))
    return found


# ------------------------------------------------------------ square grid

def _sep(tri, rect) -> bool:
    xmin, ymin, xmax, ymax = rect
    corners = [(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)]
    axes = [(1, 0), (0, 1)]
    for k in range(3):
        (ax, ay), (bx, by) = tri[k], tri[(k + 1) % 3]
        axes.append((ay - by, bx - ax))
    for nx, ny in axes:
        tp = [x * nx + y * ny for x, y in tri]
        rp = [x * nx + y * ny for x, y in corners]
        if max(tp) <= min(rp) or max(rp) <= min(tp):
            return True
    return False


def square_grid_chambers(rect) -> int:
    """Chambers of the unit square grid whose interior meets the open rectangle.

    Each unit square [i, i+1] x [j, j+1] splits into 8 triangles around its
    centre, one per (vertex, edge midpoint, centre) flag.  Coordinates are
    exact fractions.
    """
    xmin, ymin, xmax, ymax = [Fraction(v) for v in rect]
    count = 0
    for i in range(int(xmin) - 2, int(xmax) + 2):
        for j in range(int(ymin) - 2, int(ymax) + 2):
            c = (i + Fraction(1, 2), j + Fraction(1, 2))
            corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
            for k in range(4):
                a, b = corners[k], corners[(k + 1) % 4]
                mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
                for v in (a, b):
                    if not _sep([v, mid, c], (xmin, ymin, xmax, ymax)):
                        count += 1
    return count


# ------------------------------------------------------------ in-memory query

def oracle_filter(records, check):
    """Filter records with a plain Python predicate over column values."""
    out = []
    for rec in records:
        row = rec.as_dict()
        for col in BOOL_COLUMNS:
            row[col] = "true" if row[col] else "false"
        if check(row):
            out.append(rec)
    return out


def random_relabel(rng, s: DelaneySymbol) -> DelaneySymbol:
    from dstiling.dsym import relabel
    perm = list(range(1, s.size + 1))
    rng.shuffle(perm)
    return relabel(s, perm)


def chunked(it, n):
    it = iter(it)
    while True:
        block = list(itertools.islice(it, n))
        if not block:
            return
        yield block
