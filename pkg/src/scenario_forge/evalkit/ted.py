"""Ordered tree edit distance with unit costs (Zhang-Shasha).

Minimum-cost script of node insertions, deletions, and relabels turning
one ordered labeled tree into the other, each at cost 1.  The classic
keyroot decomposition gives O(n^2 * min-depth) time, far more than enough
for scenario trees (tens of nodes).
"""

from __future__ import annotations

from dataclasses import dataclass

from scenario_forge.ir import LabeledTree


@dataclass
class _Annotated:
    """Postorder arrays: labels, leftmost leaf descendants, keyroots."""

    labels: list[str]
    lmds: list[int]
    keyroots: list[int]


def _annotate(root: LabeledTree) -> _Annotated:
    labels: list[str] = []
    lmds: list[int] = []

    def walk(node: LabeledTree) -> int:
        child_lmds = [walk(child) for child in node.children]
        index = len(labels)
        labels.append(node.label)
        lmds.append(child_lmds[0] if child_lmds else index)
        return lmds[index]

    walk(root)
    keyroot_for_lmd: dict[int, int] = {}
    for i, lmd in enumerate(lmds):
        keyroot_for_lmd[lmd] = i  # last (highest) node per lmd wins
    return _Annotated(labels, lmds, sorted(keyroot_for_lmd.values()))


def ted(a: LabeledTree, b: LabeledTree) -> int:
    """Unit-cost ordered tree edit distance; symmetric, triangle-obeying."""
    ta, tb = _annotate(a), _annotate(b)
    n, m = len(ta.labels), len(tb.labels)
    dist = [[0] * m for _ in range(n)]

    for i in ta.keyroots:
        for j in tb.keyroots:
            _treedist(ta, tb, i, j, dist)
    return dist[n - 1][m - 1]


def _treedist(ta: _Annotated, tb: _Annotated, i: int, j: int, dist: list[list[int]]) -> None:
    ioff = ta.lmds[i] - 1
    joff = tb.lmds[j] - 1
    rows = i - ioff + 1
    cols = j - joff + 1
    forest = [[0] * cols for _ in range(rows)]
    for x in range(1, rows):
        forest[x][0] = forest[x - 1][0] + 1  # delete
    for y in range(1, cols):
        forest[0][y] = forest[0][y - 1] + 1  # insert

    for x in range(1, rows):
        for y in range(1, cols):
            if ta.lmds[i] == ta.lmds[x + ioff] and tb.lmds[j] == tb.lmds[y + joff]:
                relabel = 0 if ta.labels[x + ioff] == tb.labels[y + joff] else 1
                forest[x][y] = min(
                    forest[x - 1][y] + 1,
                    forest[x][y - 1] + 1,
                    forest[x - 1][y - 1] + relabel,
                )
                dist[x + ioff][y + joff] = forest[x][y]
            else:
                p = ta.lmds[x + ioff] - 1 - ioff
                q = tb.lmds[y + joff] - 1 - joff
                forest[x][y] = min(
                    forest[x - 1][y] + 1,
                    forest[x][y - 1] + 1,
                    forest[p][q] + dist[x + ioff][y + joff],
                )
