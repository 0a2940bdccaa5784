"""Delaney-Dress symbols: validation, text encoding, components, canonical forms."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence

COLOR_PAIRS = ((0, 1), (0, 2), (1, 2))


class SymbolError(ValueError):
    """Raised for malformed or invalid symbol input."""


class SymbolSyntaxError(SymbolError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class SymbolValidationError(SymbolError):
    def __init__(self, message: str, invariant: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


@dataclass(frozen=True)
class Component:
    colors: tuple[int, int]
    nodes: tuple[int, ...]
    kind: str  # "cycle" or "chain"
    r: int
    v: int

    @property
    def m(self) -> int:
        return self.r * self.v


class DelaneySymbol:
    """Immutable Delaney-Dress symbol on nodes 1..n.

    ``ops[i][D - 1]`` is the image of node ``D`` under sigma_i; ``m01`` and
    ``m12`` are per-node tuples.  m02 is the constant 2.
    """

    __slots__ = ("size", "ops", "m01", "m12", "_hash")

    def __init__(self, ops: Sequence[Sequence[int]], m01: Sequence[int],
                 m12: Sequence[int], validate: bool = True):
        ops = tuple(tuple(int(x) for x in op) for op in ops)
        if len(ops) != 3:
            raise SymbolValidationError("need exactly three maps", "arity")
        n = len(ops[0])
        self.size = n
        self.ops = ops
        self.m01 = tuple(int(x) for x in m01)
        self.m12 = tuple(int(x) for x in m12)
        self._hash = None
        if validate:
            check_symbol(self)

    def s(self, i: int, d: int) -> int:
        return self.ops[i][d - 1]

    def m(self, i: int, j: int, d: int) -> int:
        if (i, j) == (0, 1):
            return self.m01[d - 1]
        if (i, j) == (1, 2):
            return self.m12[d - 1]
        if (i, j) == (0, 2):
            return 2
        raise ValueError(f"bad color pair {(i, j)}")

    @property
    def nodes(self) -> range:
        return range(1, self.size + 1)

    def __eq__(self, other):
        if not isinstance(other, DelaneySymbol):
            return NotImplemented
        return (self.ops, self.m01, self.m12) == (other.ops, other.m01, other.m12)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ops, self.m01, self.m12))
        return self._hash

    def __repr__(self):
        return f"DelaneySymbol({serialize(self)!r})"

    def __str__(self):
        return serialize(self)


def orbit(s: DelaneySymbol, i: int, j: int, d: int) -> list[int]:
    """Nodes of the i,j-component of ``d`` in walk order, starting at ``d``."""
    seen = [d]
    mark = {d}
    stack = [d]
    while stack:
        e = stack.pop()
        for c in (i, j):
            f = s.ops[c][e - 1]
            if f not in mark:
                mark.add(f)
                seen.append(f)
                stack.append(f)
    return seen


def r_value(s: DelaneySymbol, i: int, j: int, d: int) -> int:
    """Smallest k >= 1 with (sigma_i sigma_j)^k (d) = d."""
    oi, oj = s.ops[i], s.ops[j]
    k = 0
    e = d
    while True:
        e = oi[oj[e - 1] - 1]
        k += 1
        if e == d:
            return k


def components(s: DelaneySymbol, i: int, j: int) -> list[Component]:
    if not i < j:
        raise ValueError("colors must satisfy i < j")
    out = []
    done = set()
    for d in s.nodes:
        if d in done:
            continue
        nodes = orbit(s, i, j, d)
        done.update(nodes)
        chain = any(s.ops[c][e - 1] == e for e in nodes for c in (i, j))
        r = r_value(s, i, j, d)
        m = s.m(i, j, d)
        out.append(Component((i, j), tuple(sorted(nodes)), "chain" if chain else "cycle",
                             r, m // r))
    return out


def all_components(s: DelaneySymbol) -> dict[tuple[int, int], list[Component]]:
    return {p: components(s, *p) for p in COLOR_PAIRS}


def complexity(s: DelaneySymbol) -> int:
    return s.size


def check_symbol(s: DelaneySymbol) -> None:
    n = s.size
    if n < 1:
        raise SymbolValidationError("symbol must have at least one node", "size")
    for i, op in enumerate(s.ops):
        if len(op) != n:
            raise SymbolValidationError(f"sigma{i} has {len(op)} entries, expected {n}", "size")
        for d, e in enumerate(op, 1):
            if not 1 <= e <= n:
                raise SymbolValidationError(f"sigma{i}({d}) = {e} out of range", "range")
            if op[e - 1] != d:
                raise SymbolValidationError(f"sigma{i} is not an involution at node {d}",
                                            "involution")
    for name, ms in (("m01", s.m01), ("m12", s.m12)):
        if len(ms) != n:
            raise SymbolValidationError(f"{name} has {len(ms)} entries, expected {n}", "size")
        for d, m in enumerate(ms, 1):
            if m < 3:
                raise SymbolValidationError(f"{name}({d}) = {m} is below 3", "m-minimum")
    if len(orbit_all(s, 1)) != n:
        raise SymbolValidationError("graph is not connected", "connected")
    for i, j in COLOR_PAIRS:
        for comp in _raw_orbits(s, i, j):
            d = comp[0]
            m = s.m(i, j, d)
            for e in comp:
                if s.m(i, j, e) != m:
                    raise SymbolValidationError(
                        f"m{i}{j} not constant on component of node {d}", "m-constant")
            r = r_value(s, i, j, d)
            if (i, j) == (0, 2):
                if r > 2:
                    raise SymbolValidationError(
                        f"sigma0 sigma2 orbit of node {d} has length {r} > 2", "r02")
            elif m % r:
                raise SymbolValidationError(
                    f"r{i}{j}({d}) = {r} does not divide m{i}{j} = {m}", "divisibility")


def orbit_all(s: DelaneySymbol, d: int) -> list[int]:
    seen = {d}
    order = [d]
    for e in order:
        for op in s.ops:
            f = op[e - 1]
            if f not in seen:
                seen.add(f)
                order.append(f)
    return order


def _raw_orbits(s: DelaneySymbol, i: int, j: int) -> Iterator[list[int]]:
    done = set()
    for d in s.nodes:
        if d not in done:
            nodes = orbit(s, i, j, d)
            done.update(nodes)
            yield nodes


# ---------------------------------------------------------------- text format

_TOKEN = re.compile(r"0|[1-9][0-9]*")


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def expect(self, ch: str):
        if not self.text.startswith(ch, self.pos):
            got = self.text[self.pos:self.pos + 1] or "end of input"
            raise SymbolSyntaxError(f"expected {ch!r}, got {got!r}", self.pos)
        self.pos += len(ch)

    def integer(self) -> int:
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            raise SymbolSyntaxError("expected integer", self.pos)
        self.pos = m.end()
        return int(m.group())

    def int_list(self, n: int) -> list[int]:
        out = [self.integer()]
        for _ in range(n - 1):
            self.expect(" ")
            out.append(self.integer())
        return out


def parse(text: str, validate: bool = True) -> DelaneySymbol:
    """Parse ``<n:s0,s1,s2:m01,m12>`` with space-separated integer lists."""
    rd = _Reader(text)
    rd.expect("<")
    n = rd.integer()
    if n < 1:
        raise SymbolSyntaxError("size must be positive", 1)
    rd.expect(":")
    ops = []
    for k in range(3):
        if k:
            rd.expect(",")
        ops.append(rd.int_list(n))
    rd.expect(":")
    m01 = rd.int_list(n)
    rd.expect(",")
    m12 = rd.int_list(n)
    rd.expect(">")
    if rd.pos != len(text):
        raise SymbolSyntaxError("trailing characters", rd.pos)
    return DelaneySymbol(ops, m01, m12, validate=validate)


def serialize(s: DelaneySymbol) -> str:
    def lst(xs):
        return " ".join(map(str, xs))
    return (f"<{s.size}:{lst(s.ops[0])},{lst(s.ops[1])},{lst(s.ops[2])}:"
            f"{lst(s.m01)},{lst(s.m12)}>")


# ------------------------------------------------------------- canonical form

def traversal(ops: Sequence[Sequence[int]], start: int) -> tuple[list[int], list[int]]:
    """Ordered breadth-first traversal from ``start`` (0-based maps).

    Returns (trace, order): the flat neighbor list in new numbering (1-based)
    and the old node (0-based) that received each new number.
    """
    n = len(ops[0])
    num = [0] * n
    num[start] = 1
    order = [start]
    trace = []
    nxt = 2
    k = 0
    while k < len(order):
        d = order[k]
        for op in ops:
            e = op[d]
            if not num[e]:
                num[e] = nxt
                nxt += 1
                order.append(e)
            trace.append(num[e])
        k += 1
    return trace, order


def _zero_based(s: DelaneySymbol) -> list[list[int]]:
    return [[x - 1 for x in op] for op in s.ops]


def canonical_key(s: DelaneySymbol) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Minimum over all start nodes of (graph trace, m01 list, m12 list)."""
    return _canonical(s)[0]


def _canonical(s: DelaneySymbol):
    ops = _zero_based(s)
    best = None
    best_order = None
    for start in range(s.size):
        trace, order = traversal(ops, start)
        key = (tuple(trace), tuple(s.m01[d] for d in order), tuple(s.m12[d] for d in order))
        if best is None or key < best:
            best, best_order = key, order
    return best, best_order


def format_graph_trace(trace: Sequence[int]) -> str:
    return "; ".join(",".join(map(str, trace[k:k + 3])) for k in range(0, len(trace), 3))


def graph_trace(s: DelaneySymbol) -> str:
    """Canonical trace of the underlying graph alone (m-values ignored)."""
    ops = _zero_based(s)
    best = min(tuple(traversal(ops, d)[0]) for d in range(s.size))
    return format_graph_trace(best)


def canonical_trace(s: DelaneySymbol) -> str:
    """Canonical string: graph trace, then ``|`` m01 list ``|`` m12 list."""
    trace, m01, m12 = canonical_key(s)
    return (f"{format_graph_trace(trace)} | {' '.join(map(str, m01))}"
            f" | {' '.join(map(str, m12))}")


def relabel(s: DelaneySymbol, perm: Sequence[int]) -> DelaneySymbol:
    """Rename node D to perm[D - 1] (perm is a permutation of 1..n)."""
    n = s.size
    inv = [0] * n
    for d, p in enumerate(perm, 1):
        inv[p - 1] = d
    ops = [[perm[op[inv[k] - 1] - 1] for k in range(n)] for op in s.ops]
    m01 = [s.m01[inv[k] - 1] for k in range(n)]
    m12 = [s.m12[inv[k] - 1] for k in range(n)]
    return DelaneySymbol(ops, m01, m12, validate=False)


def canonical_form(s: DelaneySymbol) -> DelaneySymbol:
    """The isomorphic copy numbered by its lexicographically smallest traversal."""
    _, order = _canonical(s)
    perm = [0] * s.size
    for new, old in enumerate(order, 1):
        perm[old] = new
    return relabel(s, perm)


def is_isomorphic(a: DelaneySymbol, b: DelaneySymbol) -> bool:
    if a.size != b.size:
        return False
    return canonical_key(a) == canonical_key(b)


def dual(s: DelaneySymbol) -> DelaneySymbol:
    return DelaneySymbol((s.ops[2], s.ops[1], s.ops[0]), s.m12, s.m01, validate=False)


# ------------------------------------------------------------ minimal image

def minimal_image(s: DelaneySymbol) -> DelaneySymbol:
    """Quotient by the coarsest sigma-compatible partition refining (m01, m12).

    Moore-style partition refinement, as in DFA state minimization.
    """
    n = s.size
    ops = _zero_based(s)
    labels = {}
    cls = [labels.setdefault((s.m01[d], s.m12[d]), len(labels)) for d in range(n)]
    count = len(labels)
    while True:
        sig = {}
        new = [sig.setdefault((cls[d], cls[ops[0][d]], cls[ops[1][d]], cls[ops[2][d]]), len(sig))
               for d in range(n)]
        if len(sig) == count:
            break
        cls, count = new, len(sig)
    if count == n:
        return s
    # number classes by first occurrence
    reps = {}
    for d in range(n):
        reps.setdefault(cls[d], d)
    index = {c: k for k, c in enumerate(sorted(reps, key=reps.get))}
    qops = [[0] * count for _ in range(3)]
    m01 = [0] * count
    m12 = [0] * count
    for c, d in reps.items():
        k = index[c]
        for i in range(3):
            qops[i][k] = index[cls[ops[i][d]]] + 1
        m01[k] = s.m01[d]
        m12[k] = s.m12[d]
    return DelaneySymbol(qops, m01, m12)


def automorphism_count(s: DelaneySymbol) -> int:
    key = canonical_key(s)
    ops = _zero_based(s)
    count = 0
    for d in range(s.size):
        trace, order = traversal(ops, d)
        if (tuple(trace), tuple(s.m01[e] for e in order), tuple(s.m12[e] for e in order)) == key:
            count += 1
    return count
