"""Dependency graphs over an edge predicate, SCCs and decomposition checks."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

from .terms import Rule

Approx = Callable[[Rule, Rule], bool]


class DecompositionError(Exception):
    pass


class MissingPair(DecompositionError):
    def __init__(self, rule: Rule):
        self.rule = rule
        super().__init__(f"pair {rule} is not covered by the decomposition")


class ExtraPair(DecompositionError):
    def __init__(self, rule: Rule):
        self.rule = rule
        super().__init__(f"pair {rule} is not a dependency pair (or listed too often)")


class ForwardEdge(DecompositionError):
    def __init__(self, i: int, j: int, b: Rule, c: Rule):
        self.i, self.j, self.b, self.c = i, j, b, c
        super().__init__(
            f"edge from component {i + 1} to later component {j + 1}: {b}  ==>  {c}"
        )


@dataclass(frozen=True)
class DpGraph:
    nodes: tuple[Rule, ...]
    adjacency: tuple[tuple[bool, ...], ...]

    def successors(self, i: int) -> list[int]:
        return [j for j, e in enumerate(self.adjacency[i]) if e]

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(len(self.nodes)) for j in self.successors(i)]

    def __len__(self):
        return len(self.nodes)


def build_graph(approx: Approx, pairs: Sequence[Rule]) -> DpGraph:
    nodes = tuple(pairs)
    adj = tuple(tuple(bool(approx(a, b)) for b in nodes) for a in nodes)
    return DpGraph(nodes, adj)


def from_edges(n: int, edges) -> DpGraph:
    """Graph on n anonymous nodes; used for testing the SCC machinery."""
    es = set(edges)
    adj = tuple(tuple((i, j) in es for j in range(n)) for i in range(n))
    return DpGraph(tuple(range(n)), adj)


def sccs(g: DpGraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative, roots tried by increasing index.

    Components come out in reverse topological order: if an edge goes from
    component A to a different component B, B is emitted first.
    """
    n = len(g)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(g.successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(g.successors(w))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


def valid_decomp(approx: Approx, cs: Sequence[Sequence[Rule]]) -> bool:
    """No approx-edge from any component to a later one."""
    return first_forward_edge(approx, cs) is None


def first_forward_edge(approx: Approx, cs: Sequence[Sequence[Rule]]):
    for i, ci in enumerate(cs):
        for j in range(i + 1, len(cs)):
            for b in ci:
                for c in cs[j]:
                    if approx(b, c):
                        return i, j, b, c
    return None


def co_scc(approx: Approx, component: Sequence[Rule]) -> bool:
    """True iff the approx-graph restricted to ``component`` has no cycle."""
    g = build_graph(approx, component)
    for comp in sccs(g):
        if len(comp) > 1 or g.adjacency[comp[0]][comp[0]]:
            return False
    return True


def check_decomposition(approx: Approx, pairs: Sequence[Rule], cs: Sequence[Sequence[Rule]]) -> None:
    """Raise unless ``cs`` lists exactly ``pairs`` (as a multiset) in a valid order.

    Rules are compared up to variable renaming.
    """
    want = Counter(p.canonical() for p in pairs)
    have = Counter(r.canonical() for c in cs for r in c)
    for r in pairs:
        if have[r.canonical()] < want[r.canonical()]:
            raise MissingPair(r)
    for c in cs:
        for r in c:
            if have[r.canonical()] > want[r.canonical()]:
                raise ExtraPair(r)
    hit = first_forward_edge(approx, cs)
    if hit is not None:
        raise ForwardEdge(*hit)
