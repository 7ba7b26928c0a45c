"""Shared builders: named graphs, random connected graphs, and exhaustive
non-isomorphic graph enumeration for the small-instance sweeps."""

from __future__ import annotations

import random
from itertools import permutations, product

import pytest

from twsolve import Graph


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def grid_graph(rows: int, cols: int) -> Graph:
    def vid(i, j):
        return i * cols + j + 1

    edges = []
    for i in range(rows):
        for j in range(cols):
            if j + 1 < cols:
                edges.append((vid(i, j), vid(i, j + 1)))
            if i + 1 < rows:
                edges.append((vid(i, j), vid(i + 1, j)))
    return Graph(rows * cols, edges)


def petersen_graph() -> Graph:
    edges = [(i + 1, (i + 1) % 5 + 1) for i in range(5)]
    edges += [(i + 6, (i + 2) % 5 + 6) for i in range(5)]
    edges += [(i + 1, i + 6) for i in range(5)]
    return Graph(10, edges)


def bowtie_graph() -> Graph:
    # two triangles sharing vertex 1
    return Graph(5, [(1, 2), (1, 3), (2, 3), (1, 4), (1, 5), (4, 5)])


def random_connected(n: int, m: int, seed: int) -> Graph:
    """Random connected graph: random spanning tree plus random extra edges."""
    rng = random.Random(seed)
    verts = list(range(1, n + 1))
    rng.shuffle(verts)
    edges = set()
    for i in range(1, n):
        j = rng.randrange(i)
        edges.add(tuple(sorted((verts[i], verts[j]))))
    pool = [
        (u, v)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
        if (u, v) not in edges
    ]
    rng.shuffle(pool)
    for e in pool[: max(0, m - len(edges))]:
        edges.add(e)
    return Graph(n, sorted(edges))


# -- exhaustive enumeration up to isomorphism ------------------------------------


def _pair_index(n: int):
    idx = {}
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            idx[(i, j)] = k
            k += 1
    return idx


def _canonical(n: int, mask: int) -> int:
    """Minimum edge-bitmask over vertex permutations (degree-refined)."""
    idx = _pair_index(n)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    deg = [0] * n
    adj = [[False] * n for _ in range(n)]
    for (i, j), b in idx.items():
        if (mask >> b) & 1:
            deg[i] += 1
            deg[j] += 1
            adj[i][j] = adj[j][i] = True
    color = [
        (deg[v], tuple(sorted(deg[u] for u in range(n) if adj[v][u]))) for v in range(n)
    ]
    classes: dict = {}
    for v in range(n):
        classes.setdefault(color[v], []).append(v)
    ordered = [classes[c] for c in sorted(classes)]
    slots = []
    start = 0
    for cls in ordered:
        slots.append(list(range(start, start + len(cls))))
        start += len(cls)
    best = None
    for combo in product(*(permutations(cls) for cls in ordered)):
        perm = [0] * n
        for cls_slots, cls_perm in zip(slots, combo):
            for s, v in zip(cls_slots, cls_perm):
                perm[v] = s
        out = 0
        rem = mask
        while rem:
            low = rem & -rem
            rem ^= low
            i, j = pairs[low.bit_length() - 1]
            a, b = perm[i], perm[j]
            out |= 1 << idx[(min(a, b), max(a, b))]
            if best is not None and out > best:
                break
        else:
            if best is None or out < best:
                best = out
    return best


def _decode(n: int, mask: int) -> tuple[tuple[int, int], ...]:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = []
    rem = mask
    while rem:
        low = rem & -rem
        rem ^= low
        edges.append(pairs[low.bit_length() - 1])
    return tuple(edges)


def graphs_up_to_iso(max_n: int) -> dict[int, list[Graph]]:
    """All graphs on 1..max_n vertices up to isomorphism, by augmentation."""
    levels: dict[int, list[tuple[tuple[int, int], ...]]] = {1: [()]}
    for n in range(2, max_n + 1):
        idx = _pair_index(n)
        seen = set()
        for base_edges in levels[n - 1]:
            base = 0
            for i, j in base_edges:
                base |= 1 << idx[(i, j)]
            for nbrs in range(1 << (n - 1)):
                mask = base
                m = nbrs
                while m:
                    low = m & -m
                    m ^= low
                    mask |= 1 << idx[(low.bit_length() - 1, n - 1)]
                seen.add(_canonical(n, mask))
        levels[n] = [_decode(n, mask) for mask in sorted(seen)]
    return {
        n: [Graph(n, [(i + 1, j + 1) for i, j in edges]) for edges in lvl]
        for n, lvl in levels.items()
    }


EXPECTED_ALL = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044}
EXPECTED_CONNECTED = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853}


@pytest.fixture(scope="session")
def graphs_to_6() -> dict[int, list[Graph]]:
    got = graphs_up_to_iso(6)
    for n in range(1, 7):
        assert len(got[n]) == EXPECTED_ALL[n], f"enumeration bug at n={n}"
    return got


@pytest.fixture(scope="session")
def graphs_to_7() -> dict[int, list[Graph]]:
    got = graphs_up_to_iso(7)
    for n in range(1, 8):
        assert len(got[n]) == EXPECTED_ALL[n], f"enumeration bug at n={n}"
    return got


def connected_only(by_n: dict[int, list[Graph]], max_n: int) -> list[Graph]:
    out = []
    for n in range(1, max_n + 1):
        out.extend(g for g in by_n[n] if g.is_connected())
    return out
