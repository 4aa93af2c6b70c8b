"""Property dependency graph and its deterministic topological order."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import networkx as nx

from ..errors import CyclicDependency
from ..lang import ast as A

Node = tuple[str, str]


def var_refs(e) -> Iterator[str]:
    """Names of every variable an expression mentions."""
    match e:
        case A.VarRef(name=n):
            yield n
        case A.AnchorExpr(target=t):
            yield t.name
        case A.BinOp(left=l, right=r):
            yield from var_refs(l)
            yield from var_refs(r)
        case A.Vec3Lit():
            for c in e.components:
                yield from var_refs(c)
        case A.Call(args=args):
            for a in args:
                yield from var_refs(a)


def specifier_refs(s) -> Iterator[str]:
    match s:
        case A.With(value=v) | A.In(region=v) | A.Facing(direction=v) | A.FacingToward(target=v):
            yield from var_refs(v)
        case A.At(value=v, relative_to=r):
            yield from var_refs(v)
            if r is not None:
                yield from var_refs(r)
        case A.Beyond(target=t, by=b, origin=o):
            for e in (t, b, o):
                yield from var_refs(e)
        case A.Directional(of=v) | A.On(target=v) | A.AlignedWith(target=v):
            yield from var_refs(v)


@dataclass(frozen=True)
class DependencyOrder:
    graph: nx.DiGraph
    order: tuple[Node, ...]

    def predecessors(self, node: Node) -> set[Node]:
        return set(self.graph.predecessors(node))


def _geometry_props(spec: A.SpecAST, name: str, by_name: dict) -> list[str]:
    """Properties of a referenced object that its pose/box depends on."""
    props = spec.properties(by_name[name])
    return [p for p in (A.POSITION, A.ORIENTATION, *A.DIMENSIONS) if p in props]


def build_dependency_order(spec: A.SpecAST) -> DependencyOrder:
    """Graph of "sampled before" edges between (object, property) nodes.

    Ties among ready nodes break by declaration order, then property name.
    """
    g = nx.DiGraph()
    by_name = {d.name: d for d in spec.declarations}
    index = {d.name: i for i, d in enumerate(spec.declarations)}

    for d in spec.declarations:
        for p in spec.properties(d):
            g.add_node((d.name, p))

    def depend_on_refs(refs, target: Node):
        for ref in refs:
            if ref not in by_name:
                continue
            for p in _geometry_props(spec, ref, by_name):
                if (ref, p) != target:
                    g.add_edge((ref, p), target)

    for d in spec.declarations:
        pos = (d.name, A.POSITION)
        orient = (d.name, A.ORIENTATION)
        for dim in A.DIMENSIONS:
            if (d.name, dim) in g:
                g.add_edge((d.name, dim), pos)
        o_spec = d.orientation_specifier
        if isinstance(o_spec, A.FacingToward):
            g.add_edge(pos, orient)
        else:
            g.add_edge(orient, pos)
        for s in d.specifiers:
            if A.is_position_specifier(s):
                target = pos
            elif A.is_orientation_specifier(s):
                target = orient
            else:
                target = (d.name, s.name)
            depend_on_refs(specifier_refs(s), target)

    try:
        order = tuple(nx.lexicographical_topological_sort(g, key=lambda n: (index[n[0]], n[1])))
    except nx.NetworkXUnfeasible:
        cycle = [u for u, _ in nx.find_cycle(g)]
        raise CyclicDependency(cycle) from None
    return DependencyOrder(g, order)
