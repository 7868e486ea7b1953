"""Seeds, exchange relations, exchange-graph exploration and counting checks.

A seed assigns an exact Laurent form to every mutable vertex of a partitioned
quiver; frozen vertices carry invertible coefficient symbols (or the constant
1 in coefficient-free mode).  Exploration is a breadth-first closure under
mutation at every mutable vertex, deduplicating clusters as unordered
multisets of canonical variable serializations.
"""
from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .laurent import Context, DenominatorVector, LaurentForm, LaurentViolation
from .pquiver import (V1, V2, V3, V4, PartitionedQuiver, VertexClassification)


@dataclass
class Seed:
    quiver: PartitionedQuiver
    context: Context
    values: dict[int, LaurentForm]
    coeff_symbols: dict[int, int]
    coeff_free: bool = False
    tracking: str = "exact"   # "exact" | "denominator"

    def value_of(self, v: int):
        if v in self.values:
            return self.values[v]
        cls = LaurentForm if self.tracking == "exact" else DenominatorVector
        if self.coeff_free:
            return cls.one(self.context.nvars)
        return cls.variable(self.coeff_symbols[v], self.context.nvars)

    def cluster_key(self) -> tuple[bytes, ...]:
        return tuple(sorted(v.canonical_serialize() for v in self.values.values()))

    def copy(self) -> "Seed":
        return Seed(self.quiver, self.context, dict(self.values),
                    self.coeff_symbols, self.coeff_free, self.tracking)


def initial_seed(quiver: PartitionedQuiver, coeff_free: bool = False,
                 tracking: str = "exact") -> Seed:
    """Distinguished seed: x_v at each mutable vertex, y_b at each frozen.

    tracking="denominator" replaces every value by its exact denominator
    vector; the exchange recursion maps through the valuation exactly, which
    keeps deep infinite-type explorations affordable.
    """
    if tracking not in ("exact", "denominator"):
        raise ValueError(f"unknown tracking mode {tracking!r}")
    mutables = quiver.mutable_ids()
    frozens = quiver.frozen_ids()
    ctx = Context(len(mutables), len(frozens))
    cls = LaurentForm if tracking == "exact" else DenominatorVector
    values = {v: cls.variable(i, ctx.nvars) for i, v in enumerate(mutables)}
    coeffs = {v: ctx.n_cluster + i for i, v in enumerate(frozens)}
    return Seed(quiver, ctx, values, coeffs, coeff_free, tracking)


def exchange_value(seed: Seed, cls: VertexClassification):
    """The exchange polynomial E with x_t * x_t' = E, per vertex type."""
    val = seed.value_of
    if cls.type == V1:
        (a, b), (c, d) = cls.product_pairs
        return val(a) * val(b) + val(c) * val(d)
    if cls.type in (V2, V4):
        return val(cls.i)
    # V3: outer neighbours i, k; quasi partner j
    s = val(cls.i) + val(cls.k)
    return s * s + val(cls.i) * val(cls.j) * val(cls.j) * val(cls.k)


def relation_text(cls: VertexClassification, seed: Seed | None = None) -> str:
    """Human-readable exchange relation instance.

    With a seed, vertices are named by their symbol (x by mutable rank, y by
    coefficient rank, matching the rendered values); otherwise by vertex id.
    """
    if seed is not None:
        mut = {v: i for i, v in enumerate(seed.quiver.mutable_ids())}

        def nm(v):
            if v in mut:
                return f"x{mut[v] + 1}"
            return f"y{seed.coeff_symbols[v] - seed.context.n_cluster + 1}"
    else:
        def nm(v):
            return f"x{v}"

    if cls.type == V1:
        (a, b), (c, d) = cls.product_pairs
        rhs = f"{nm(a)}*{nm(b)} + {nm(c)}*{nm(d)}"
    elif cls.type in (V2, V4):
        rhs = nm(cls.i)
    else:
        i, j, k = cls.i, cls.j, cls.k
        rhs = f"({nm(i)} + {nm(k)})^2 + {nm(i)}*{nm(j)}^2*{nm(k)}"
    return f"[{cls.type}] {nm(cls.t)} * {nm(cls.t)}' = {rhs}"


def mutate_seed(seed: Seed, t: int) -> Seed:
    """Mutate at vertex t: new quiver plus the exchanged variable at t."""
    cls = seed.quiver.classify_vertex(t)
    ex = exchange_value(seed, cls)
    try:
        new_value = ex.divide(seed.values[t])
    except LaurentViolation as exc:
        raise LaurentViolation(
            f"Laurent phenomenon falsified at vertex {t}: {exc}") from exc
    out = seed.copy()
    out.quiver = seed.quiver.mutate(t)
    out.values[t] = new_value
    return out


class LimitExceeded(RuntimeError):
    """Exploration hit its budget; carries the partial graph."""

    def __init__(self, message: str, graph: "ExchangeGraph"):
        super().__init__(message)
        self.graph = graph


@dataclass
class ExchangeGraph:
    nodes: dict[tuple, Seed] = field(default_factory=dict)
    adjacency: dict[tuple, dict[int, tuple]] = field(default_factory=dict)
    complete: set = field(default_factory=set)
    paths: dict[tuple, tuple[int, ...]] = field(default_factory=dict)
    variables: dict[bytes, tuple[LaurentForm, tuple[int, ...]]] = field(default_factory=dict)
    root: tuple | None = None
    closed: bool = False

    def node_count(self) -> int:
        return len(self.nodes)

    def edge_count(self) -> int:
        seen = set()
        for k, nbrs in self.adjacency.items():
            for t, ck in nbrs.items():
                seen.add(frozenset((k, ck)))
        return len(seen)

    def variable_count(self) -> int:
        return len(self.variables)

    def degree_audit(self) -> list[str]:
        """Every complete node has one distinct neighbour cluster per vertex."""
        out = []
        for k in self.complete:
            nbrs = self.adjacency.get(k, {})
            n = len(self.nodes[k].quiver.mutable_ids())
            if len(nbrs) != n:
                out.append(f"node has {len(nbrs)} mutations, expected {n}")
            targets = list(nbrs.values())
            if len(set(targets)) != len(targets):
                out.append("two mutations reach the same neighbour cluster")
            if k in targets:
                out.append("a mutation fixed the cluster")
        return out

    def connectivity_audit(self) -> bool:
        """Every node reachable from the root along recorded edges."""
        if self.root is None:
            return False
        undirected: dict[tuple, set] = {k: set() for k in self.nodes}
        for k, nbrs in self.adjacency.items():
            for ck in nbrs.values():
                undirected[k].add(ck)
                undirected[ck].add(k)
        seen = {self.root}
        stack = [self.root]
        while stack:
            k = stack.pop()
            for nk in undirected[k]:
                if nk not in seen:
                    seen.add(nk)
                    stack.append(nk)
        return len(seen) == len(self.nodes)

    def sorted_keys(self) -> list[tuple]:
        return sorted(self.nodes)

    def to_json(self) -> dict:
        keys = self.sorted_keys()
        index = {k: i for i, k in enumerate(keys)}
        edges = sorted(
            {(min(index[k], index[ck]), max(index[k], index[ck]), t)
             for k, nbrs in self.adjacency.items() for t, ck in nbrs.items()})
        ctx = None
        if keys:
            ctx = self.nodes[keys[0]].context
        return {
            "nodes": [
                {
                    "index": index[k],
                    "complete": k in self.complete,
                    "witness_path": list(self.paths[k]),
                    "cluster": [v.decode() for v in k],
                }
                for k in keys
            ],
            "edges": [{"a": a, "b": b, "vertex": t} for a, b, t in edges],
            "variables": sorted(
                value.render(ctx) if ctx else ser.decode()
                for ser, (value, _) in self.variables.items()),
            "closed": self.closed,
        }

    def to_dot(self) -> str:
        keys = self.sorted_keys()
        index = {k: i for i, k in enumerate(keys)}
        lines = ["graph exchange {"]
        for k in keys:
            shape = "circle" if k in self.complete else "dashed"
            lines.append(f'  "{index[k]}";')
        drawn = set()
        for k, nbrs in self.adjacency.items():
            for t, ck in nbrs.items():
                e = frozenset((k, ck))
                if e in drawn:
                    continue
                drawn.add(e)
                lines.append(f'  "{index[k]}" -- "{index[ck]}" [label="{t}"];')
        lines.append("}")
        return "\n".join(lines)


def explore(seed: Seed, max_nodes: int = 100000, max_depth: int | None = None,
            jobs: int = 1) -> ExchangeGraph:
    """Breadth-first closure under mutation with cluster deduplication.

    Raises LimitExceeded (carrying the partial graph) when the node budget or
    depth cap cuts the closure short.  Deterministic: FIFO frontier, vertices
    in ascending order; with jobs > 1 the children of a node are computed
    concurrently but merged in the same order.
    """
    g = ExchangeGraph()
    k0 = seed.cluster_key()
    g.nodes[k0] = seed
    g.paths[k0] = ()
    g.root = k0
    for v, lf in seed.values.items():
        g.variables.setdefault(lf.canonical_serialize(), (lf, ()))
    depth = {k0: 0}
    queue = deque([k0])
    pool = ThreadPoolExecutor(jobs) if jobs > 1 else None
    try:
        while queue:
            k = queue.popleft()
            if max_depth is not None and depth[k] >= max_depth:
                continue
            s = g.nodes[k]
            ts = s.quiver.mutable_ids()
            if pool is not None:
                children = list(pool.map(lambda t: mutate_seed(s, t), ts))
            else:
                children = [mutate_seed(s, t) for t in ts]
            nbrs = g.adjacency.setdefault(k, {})
            for t, child in zip(ts, children):
                ck = child.cluster_key()
                if ck not in g.nodes:
                    if len(g.nodes) >= max_nodes:
                        raise LimitExceeded(
                            f"node budget {max_nodes} exhausted", g)
                    g.nodes[ck] = child
                nbrs[t] = ck
                if ck not in g.paths:
                    g.paths[ck] = g.paths[k] + (t,)
                    depth[ck] = depth[k] + 1
                    queue.append(ck)
                for v, lf in child.values.items():
                    ser = lf.canonical_serialize()
                    if ser not in g.variables:
                        g.variables[ser] = (lf, g.paths[k] + (t,))
            g.complete.add(k)
    finally:
        if pool is not None:
            pool.shutdown(wait=False)
    if len(g.complete) != len(g.nodes):
        raise LimitExceeded("depth cap left unexpanded clusters", g)
    g.closed = True
    return g


# -- counting checks ----------------------------------------------------------


def mobius_variable_count(m: int) -> int:
    """(3m^2 - m + 2) / 2, the Moebius-strip variable count."""
    if m < 1:
        raise ValueError("need at least one marked point")
    num = 3 * m * m - m + 2
    assert num % 2 == 0
    return num // 2


def polygon_variable_count(n1: int) -> int:
    """n1 (n1 + 3) / 2, the type-A count for a polygon with n1 diagonals."""
    num = n1 * (n1 + 3)
    assert num % 2 == 0
    return num // 2


@dataclass
class PositivityReport:
    ok: bool
    checked: int
    failures: list[tuple[str, str, tuple[int, ...]]]


def check_laurent_positive(graph: ExchangeGraph) -> PositivityReport:
    """Monomial denominator and strictly positive numerator coefficients for
    every variable of a completed exploration."""
    failures = []
    for ser, (lf, path) in sorted(graph.variables.items()):
        if not isinstance(lf, LaurentForm):
            raise ValueError("positivity check needs an exact-tracking graph")
        if not lf.is_reduced():
            failures.append((ser.decode(), "not in reduced form", path))
        if lf.is_zero() or any(c <= 0 for c in lf.num.terms.values()):
            failures.append((ser.decode(), "non-positive coefficient", path))
    return PositivityReport(not failures, len(graph.variables), failures)


@dataclass
class ScanEntry:
    m: int
    family: str          # "A" or "D"
    n: int               # integral root
    family_count: int
    mobius_count: int

    @property
    def collision(self) -> bool:
        return self.family_count == self.mobius_count


@dataclass
class ScanReport:
    m_max: int
    entries: list[ScanEntry]

    @property
    def collisions(self) -> list[ScanEntry]:
        return [e for e in self.entries if e.collision]


def unistructurality_scan(m_max: int) -> ScanReport:
    """Exact integer search for variable-count collisions.

    Type A: 12m^2 - 4m + 17 a perfect square with odd root (equivalently the
    Moebius count equals some n(n+3)/2).  Contrary to the source argument,
    this has infinitely many solutions (a Pell recurrence; the first are
    m = 1, 16, 221, 3076), so collisions beyond the m = 1 boundary case are
    real and are reported, not suppressed.

    Type D is tested two ways: via the quoted discriminant 12m^2 - 23 (whose
    integral roots never give matching counts) and directly, by asking
    whether the Moebius count is itself a perfect square n^2 (it is, first at
    m = 5 with n = 6); the direct test is the faithful count comparison.
    """
    entries = []
    for m in range(1, m_max + 1):
        target = mobius_variable_count(m)
        d = 12 * m * m - 4 * m + 17   # equals 8*target + 9
        s = math.isqrt(d)
        if s * s == d and (s - 3) % 2 == 0 and s >= 5:
            n = (s - 3) // 2
            entries.append(ScanEntry(m, "A", n, polygon_variable_count(n), target))
        seen_d = set()
        d = 12 * m * m - 23
        if d >= 0:
            s = math.isqrt(d)
            if s * s == d:
                for root in ((1 + s), (1 - s)):
                    if root % 6 == 0 and root >= 6:
                        n = root // 6
                        seen_d.add(n)
                        entries.append(ScanEntry(m, "D", n, n * n, target))
        s = math.isqrt(target)
        if s * s == target and s >= 1 and s not in seen_d:
            entries.append(ScanEntry(m, "D", s, s * s, target))
    return ScanReport(m_max, entries)
