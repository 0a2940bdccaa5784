"""Quad-tree (2D) and oct-tree (3D) point index for duplicate detection."""
from __future__ import annotations

import numpy as np

CAPACITY = 8
MAX_DEPTH = 48


class _Node:
    __slots__ = ("center", "half", "items", "children")

    def __init__(self, center, half):
        self.center = center
        self.half = half
        self.items = []        # (point, value)
        self.children = None


class PointTree:
    """Bucketed 2^dim-ary tree over a cube that grows to fit new points.

    ``find_or_insert`` returns the value stored for a point within ``tol``
    (max-norm) of the query, or stores the query with the given value.
    """

    def __init__(self, dim: int, tol: float, extent: float = 1.0):
        self.dim = dim
        self.tol = tol
        self.root = _Node(np.zeros(dim), float(extent))
        self.size = 0

    def _grow(self, p):
        while np.any(np.abs(p - self.root.center) > self.root.half):
            old = self.root
            # double the cube, keeping the old one as a corner child
            shift = np.where(p >= old.center, old.half, -old.half)
            new = _Node(old.center + shift, old.half * 2)
            if old.items or old.children:
                new.children = [None] * (1 << self.dim)
                new.children[self._octant(new, old.center)] = old
            self.root = new

    def _octant(self, node, p) -> int:
        idx = 0
        for k in range(self.dim):
            if p[k] >= node.center[k]:
                idx |= 1 << k
        return idx

    def _child(self, node, idx):
        if node.children[idx] is None:
            h = node.half / 2
            offs = np.array([h if idx >> k & 1 else -h for k in range(self.dim)])
            node.children[idx] = _Node(node.center + offs, h)
        return node.children[idx]

    def find(self, p):
        p = np.asarray(p, dtype=float)[: self.dim]
        stack = [self.root]
        tol = self.tol
        while stack:
            node = stack.pop()
            if np.any(np.abs(p - node.center) > node.half + tol):
                continue
            for q, val in node.items:
                if np.abs(q - p).max() <= tol:
                    return val
            if node.children:
                stack.extend(c for c in node.children if c is not None)
        return None

    def insert(self, p, value):
        p = np.asarray(p, dtype=float)[: self.dim].copy()
        self._grow(p)
        node = self.root
        depth = 0
        while node.children is not None and depth < MAX_DEPTH:
            node = self._child(node, self._octant(node, p))
            depth += 1
        node.items.append((p, value))
        self.size += 1
        if len(node.items) > CAPACITY and depth < MAX_DEPTH:
            items, node.items = node.items, []
            node.children = [None] * (1 << self.dim)
            for q, val in items:
                self._child(node, self._octant(node, q)).items.append((q, val))

    def find_or_insert(self, p, value):
        hit = self.find(p)
        if hit is not None:
            return hit, False
        self.insert(p, value)
        return value, True

    def __len__(self):
        return self.size
