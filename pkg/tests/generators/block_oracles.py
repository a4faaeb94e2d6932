"""
Brute-force oracles and seeds for property tests.

The oracles are deliberately naive: exhaustive sign enumeration for
orientability and Python-integer elimination for GF(2) rank, so they share
no code with the library paths they check. ``relabel_block`` shuffles vertex
ids for the invariance tests.
"""

import itertools
from typing import Sequence

import numpy as np

from conley_surf.models.block import IsolatingBlock, Marking, TransitSpine
from conley_surf.models.surface import SurfaceComplex

# Seeds for the randomized block tests
SEEDS = list(range(100))

# Enumeration is exponential in the triangle count
MAX_ENUMERATED_TRIANGLES = 14


def _direction(tri: Sequence[int], a: int, b: int) -> int:
    i = tri.index(a)
    return 1 if tri[(i + 1) % 3] == b else -1


def orientable_by_enumeration(c: SurfaceComplex) -> bool:
    """
    Try every orientation of every triangle.

    Only half the assignments are tried: negating all signs keeps consistency.
    """
    tris = c.triangles
    if len(tris) > MAX_ENUMERATED_TRIANGLES:
        raise ValueError(f"{len(tris)} triangles is too many to enumerate")
    shared = [(edge, owners) for edge, owners in c.edge_triangles.items() if len(owners) == 2]
    for rest in itertools.product((1, -1), repeat=len(tris) - 1):
        signs = (1,) + rest
        if all(
            signs[t] * _direction(tris[t], *edge) != signs[o] * _direction(tris[o], *edge)
            for edge, (t, o) in shared
        ):
            return True
    return False


def rank_by_elimination(rows: Sequence[Sequence[int]]) -> int:
    """GF(2) rank with rows packed into Python integers."""
    basis: list[int] = []
    for row in rows:
        value = int("".join(str(int(x) & 1) for x in row) or "0", 2)
        for b in basis:
            value = min(value, value ^ b)
        if value:
            basis.append(value)
    return len(basis)


def relabel_block(b: IsolatingBlock, seed: int) -> IsolatingBlock:
    """The same block with its vertex ids shuffled by a seeded permutation."""
    perm = [int(v) for v in np.random.default_rng(seed).permutation(b.complex.vertex_count)]

    def edges(pairs: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
        return [(perm[a], perm[w]) for a, w in pairs]

    def marking(m: Marking) -> Marking:
        return Marking(vertices=[perm[v] for v in m.vertices], edges=edges(m.edges))

    return IsolatingBlock(
        name=f"{b.name}-relabeled-{seed}",
        complex=SurfaceComplex(
            vertex_count=b.complex.vertex_count,
            triangles=[tuple(perm[v] for v in t) for t in b.complex.triangles],
        ),
        exit_edges=edges(b.exit_edges),
        n_minus=marking(b.n_minus),
        n_plus=marking(b.n_plus),
        spines=[TransitSpine(path=tuple(perm[v] for v in s.path)) for s in b.spines],
        asserts_no_fixed_points=b.asserts_no_fixed_points,
    )
