"""Isomorph-free generation of geometry-minimal Delaney-Dress symbols.

Stage 1 builds Delaney-Dress graphs by orderly generation: graphs are grown
slot by slot in breadth-first traversal order, and a partial graph is dropped
as soon as a traversal from another start node is provably smaller.  Stage 2
assigns branching numbers per component, with exact curvature bounds.
"""
from __future__ import annotations

import logging
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Sequence

from .dsym import DelaneySymbol, traversal
from . import invariants as inv

log = logging.getLogger(__name__)

# Largest rotational order that can occur in a geometry-minimal symbol: a
# hyperbolic symbol reduced at its largest reducible order v becomes
# euclidean (v - 1 <= 6) or spherical with group order > 2 v (v - 1), which
# bounds v by 8 (polyhedral groups have order <= 120; the cyclic and
# dihedral families would need an even larger order elsewhere).
MAX_V = 8
SCALE = lcm(*range(1, MAX_V + 1))  # common denominator for c / v

UNDEF = -1


# ------------------------------------------------------------------ stage 1

class _GraphSearch:
    """Orderly generation of connected 3-colored involution graphs.

    Nodes are 0-based internally.  Graphs whose sigma0 and sigma2 do not
    commute (sigma0 sigma2 orbits longer than 2) are pruned as they are built.
    """

    def __init__(self, size: int):
        self.size = size
        self.ops = [[UNDEF] * size for _ in range(3)]
        self.n = 0

    def _commute_ok(self, x: int) -> bool:
        s0, s2 = self.ops[0], self.ops[2]
        a, b = s0[x], s2[x]
        if a == UNDEF or b == UNDEF:
            return True
        p, q = s2[a], s0[b]
        return p == UNDEF or q == UNDEF or p == q

    def _is_canonical(self, filled: int) -> bool:
        """Compare the traversal from every other start with the identity one.

        ``filled`` is the number of leading slots of the identity traversal
        that are defined.  Returns False if some start yields a determined
        prefix that is lexicographically smaller.
        """
        ops = self.ops
        n = self.n
        for start in range(1, n):
            num = [0] * n
            num[start] = 1
            order = [start]
            nxt = 2
            p = 0
            k = 0
            verdict = 0
            while k < len(order) and not verdict:
                d = order[k]
                for i in range(3):
                    if p >= filled:
                        verdict = 2
                        break
                    e = ops[i][d]
                    if e == UNDEF:
                        verdict = 2
                        break
                    if not num[e]:
                        num[e] = nxt
                        nxt += 1
                        order.append(e)
                    own = ops[p % 3][p // 3] + 1
                    if num[e] != own:
                        if num[e] < own:
                            return False
                        verdict = 1
                        break
                    p += 1
                k += 1
        return True

    def run(self, prefix: Sequence[int] = (), depth: int | None = None) -> Iterator:
        """Yield complete graphs of exactly ``self.size`` nodes (0-based op lists).

        With ``depth`` set, yield instead the choice sequences of length
        ``depth`` that survive pruning (work-package prefixes).  ``prefix``
        restricts the search to one such package.
        """
        self.ops = [[UNDEF] * self.size for _ in range(3)]
        self.n = 1
        yield from self._extend(0, list(prefix), [], depth)

    def _extend(self, pos: int, forced: list[int], path: list[int], depth):
        ops = self.ops
        n = self.n
        while pos < 3 * n and ops[pos % 3][pos // 3] != UNDEF:
            pos += 1
        if depth is not None and len(path) == depth:
            yield tuple(path)
            return
        if pos == 3 * n:
            if n == self.size and depth is None:
                yield [list(op) for op in ops]
            return
        k, i = divmod(pos, 3)
        op = ops[i]
        cands = [j for j in range(k, n) if op[j] == UNDEF]
        if n < self.size:
            cands.append(n)
        if len(path) < len(forced):
            want = forced[len(path)]
            cands = [j for j in cands if j == want]
        for j in cands:
            grew = j == n
            if grew:
                self.n += 1
            op[k] = j
            op[j] = k
            ok = True
            if i != 1:
                for x in {k, j, ops[2 - i][k], ops[2 - i][j]}:
                    if x != UNDEF and not self._commute_ok(x):
                        ok = False
                        break
            if ok:
                filled = pos + 1
                nn = self.n
                while filled < 3 * nn and ops[filled % 3][filled // 3] != UNDEF:
                    filled += 1
                if self._is_canonical(filled):
                    path.append(j)
                    yield from self._extend(pos + 1, forced, path, depth)
                    path.pop()
            op[k] = UNDEF
            op[j] = UNDEF
            if grew:
                self.n -= 1


def _graph_symbol_ops(ops0: list[list[int]]) -> list[list[int]]:
    return [[x + 1 for x in op] for op in ops0]


def enumerate_graphs(max_size: int, sizes: Iterable[int] | None = None) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield one canonical graph per isomorphism class, ordered by (size, trace).

    Graphs are returned as triples of 1-based sigma images.
    """
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    for size in (sizes if sizes is not None else range(1, max_size + 1)):
        for ops0 in _GraphSearch(size).run():
            yield tuple(tuple(x + 1 for x in op) for op in ops0)


def work_packages(size: int, depth: int) -> list[tuple[int, ...]]:
    return list(_GraphSearch(size).run(depth=depth))


def graphs_in_package(size: int, prefix: Sequence[int]):
    for ops0 in _GraphSearch(size).run(prefix=prefix):
        yield tuple(tuple(x + 1 for x in op) for op in ops0)


# ------------------------------------------------------------------ stage 2

@dataclass
class _Comp:
    pair: tuple[int, int]
    nodes: list[int]  # 0-based
    r: int
    c: int  # 2 for cycles, 1 for chains
    vmin: int


def _graph_components(ops: Sequence[Sequence[int]], i: int, j: int) -> list[_Comp]:
    n = len(ops[0])
    seen = [False] * n
    out = []
    for d in range(n):
        if seen[d]:
            continue
        nodes = [d]
        seen[d] = True
        for e in nodes:
            for c in (i, j):
                f = ops[c][e] - 1
                if not seen[f]:
                    seen[f] = True
                    nodes.append(f)
        chain = any(ops[c][e] - 1 == e for e in nodes for c in (i, j))
        r = len(nodes) if chain else len(nodes) // 2
        out.append(_Comp((i, j), nodes, r, 1 if chain else 2, -(-3 // r)))
    return out


def _automorphisms(ops: Sequence[Sequence[int]]) -> list[list[int]]:
    """Node orders (0-based) of traversals equal to the identity traversal."""
    ops0 = [[x - 1 for x in op] for op in ops]
    n = len(ops0[0])
    own, _ = traversal(ops0, 0)
    out = []
    for start in range(1, n):
        trace, order = traversal(ops0, start)
        if trace == own:
            out.append(order)
    return out


def assign_branching(ops: Sequence[Sequence[int]]) -> Iterator[DelaneySymbol]:
    """All geometry-minimal, pairwise non-isomorphic symbols on a canonical graph.

    Output is sorted by (m01 list, m12 list).
    """
    n = len(ops[0])
    comps = _graph_components(ops, 0, 1) + _graph_components(ops, 1, 2)
    for comp in _graph_components(ops, 0, 2):
        if 2 % comp.r:
            return
    autos = _automorphisms(ops)
    ncomp = len(comps)
    # scaled curvature: sum of c*SCALE/v over components minus n*SCALE/2
    base = -n * SCALE // 2
    tail_max = [0] * (ncomp + 1)
    for k in range(ncomp - 1, -1, -1):
        tail_max[k] = tail_max[k + 1] + comps[k].c * SCALE // comps[k].vmin
    vs = [0] * ncomp
    results = []

    def rec(k: int, acc: int):
        if k == ncomp:
            leaf(acc)
            return
        comp = comps[k]
        for v in range(comp.vmin, MAX_V + 1):
            vs[k] = v
            term = comp.c * SCALE // v
            kmax = acc + term + tail_max[k + 1]
            rec(k + 1, acc + term)
            if kmax < 0:
                # larger v here could be reduced back to v keeping K < 0
                break

    def leaf(kscaled: int):
        if kscaled < 0:
            for comp, v in zip(comps, vs):
                if v >= 2 and (v - 1) * comp.r >= 3:
                    if kscaled + comp.c * SCALE // (v - 1) - comp.c * SCALE // v < 0:
                        return
        elif kscaled > 0:
            if any(v > 5 for v in vs):
                return
        m01 = [0] * n
        m12 = [0] * n
        for comp, v in zip(comps, vs):
            target = m01 if comp.pair == (0, 1) else m12
            for d in comp.nodes:
                target[d] = v * comp.r
        key = m01 + m12
        for order in autos:
            other = [m01[d] for d in order] + [m12[d] for d in order]
            if other < key:
                return
        sym = DelaneySymbol(ops, m01, m12, validate=False)
        if kscaled > 0:
            o = inv.orbifold(sym)
            if o.is_bad():
                return
            if any(v > 4 for v in vs) and inv.orbifold_name(o) not in ("532", "*532"):
                return
        results.append((key, sym))

    rec(0, base)
    results.sort(key=lambda t: t[0])
    for _, sym in results:
        yield sym


# ------------------------------------------------------------------ driver

GEOMETRY_CODES = {"sph": inv.SPHERICAL, "euc": inv.EUCLIDEAN, "hyp": inv.HYPERBOLIC}


def enumerate_symbols(max_complexity: int, geometry: str | None = None,
                      sizes: Iterable[int] | None = None) -> Iterator[DelaneySymbol]:
    for ops in enumerate_graphs(max_complexity, sizes):
        for sym in assign_branching(ops):
            if geometry is None or inv.geometry_of(sym) == geometry:
                yield sym


def _package_symbols(args) -> list[DelaneySymbol]:
    size, prefix, geometry = args
    out = []
    for ops in graphs_in_package(size, prefix):
        for sym in assign_branching(ops):
            if geometry is None or inv.geometry_of(sym) == geometry:
                out.append(sym)
    return out


def _package_records(args):
    from .records import make_record
    return [make_record(sym) for sym in _package_symbols(args)]


PACKAGE_DEPTH = 4


def _packages(max_complexity: int, geometry, sizes=None):
    for size in (sizes if sizes is not None else range(1, max_complexity + 1)):
        if size <= 3:
            yield (size, (), geometry)
            continue
        for prefix in work_packages(size, PACKAGE_DEPTH):
            yield (size, prefix, geometry)


def enumerate_all(max_complexity: int, geometry: str | None = None, jobs: int = 1,
                  with_records: bool = True, progress: bool = False):
    """Stream records (or bare symbols) in (size, canonical trace) order.

    With ``jobs > 1`` work packages (subtrees of the graph search) are
    processed by a process pool and merged in package order, so the output
    does not depend on ``jobs``.
    """
    if max_complexity < 1:
        raise ValueError("max_complexity must be >= 1")
    worker = _package_records if with_records else _package_symbols
    packages = _packages(max_complexity, geometry)
    started = time.monotonic()
    done = emitted = 0

    def report():
        if progress:
            rate = emitted / max(time.monotonic() - started, 1e-9)
            print(f"packages {done}, symbols {emitted}, {rate:.0f}/s", file=sys.stderr)

    if jobs <= 1:
        for pkg in packages:
            batch = worker(pkg)
            done += 1
            emitted += len(batch)
            yield from batch
            if done % 50 == 0:
                report()
    else:
        import multiprocessing as mp
        with mp.get_context("fork").Pool(jobs) as pool:
            for batch in pool.imap(worker, packages, chunksize=1):
                done += 1
                emitted += len(batch)
                yield from batch
                if done % 50 == 0:
                    report()
    report()


def census(max_complexity: int, jobs: int = 1) -> dict[int, dict[str, int]]:
    """Per-size counts by geometry."""
    table: dict[int, dict[str, int]] = {}
    for sym in enumerate_all(max_complexity, jobs=jobs, with_records=False):
        row = table.setdefault(sym.size, {inv.SPHERICAL: 0, inv.EUCLIDEAN: 0, inv.HYPERBOLIC: 0})
        row[inv.geometry_of(sym)] += 1
    return table
