"""Pure-Python union-find kernels.

Same interface as the compiled ``_ckernel`` module; used when the extension
is not built or when ``SELFSIM_PURE=1`` is set.
"""
import numpy as np


def partition(n, left, right):
    """Return canonical class labels of the equivalence generated by pairs.

    Classes are numbered 0, 1, ... in order of their least member, so the
    labelling depends only on the partition, not on the pair order.
    """
    parent = list(range(n))
    rank = [0] * n

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for a, b in zip(np.asarray(left, dtype=np.int64).tolist(),
                    np.asarray(right, dtype=np.int64).tolist()):
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if rank[ra] < rank[rb]:
            ra, rb = rb, ra
        elif rank[ra] == rank[rb]:
            rank[ra] += 1
        parent[rb] = ra

    labels = np.empty(n, dtype=np.int64)
    seen = {}
    for i in range(n):
        r = find(i)
        lab = seen.get(r)
        if lab is None:
            lab = seen[r] = len(seen)
        labels[i] = lab
    return labels


def touching_pairs(owner, labels, n_labels):
    """Pairs ``(u, v)``, ``u < v``, of owners sharing at least one label.

    Entries with ``owner < 0`` are ignored. Output is sorted and unique.
    """
    members = [[] for _ in range(n_labels)]
    for o, lab in zip(np.asarray(owner, dtype=np.int64).tolist(),
                      np.asarray(labels, dtype=np.int64).tolist()):
        if o >= 0:
            members[lab].append(o)
    edges = set()
    for group in members:
        if len(group) < 2:
            continue
        group = sorted(set(group))
        for i, u in enumerate(group):
            for v in group[i + 1:]:
                edges.add((u, v))
    edges = sorted(edges)
    us = np.array([e[0] for e in edges], dtype=np.int64)
    vs = np.array([e[1] for e in edges], dtype=np.int64)
    return us, vs
