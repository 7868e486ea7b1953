"""Orientable double cover of a quasi-arc-free quasi-triangulation.

The cover is pure sheet bookkeeping over the orientation transport bits of
the base: every point, arc and triangle is duplicated, walks on the second
sheet run reversed, and an arc whose gluing is orientation-reversing connects
opposite sheets.  The deck involution swaps the two lifts of everything.
"""
from __future__ import annotations

from dataclasses import dataclass

from .pquiver import PartitionedQuiver
from .surface import (InvalidTriangulation, QuasiTriangulation, Triangle,
                      TRI_ANTI_SELF_FOLDED, TRI_QUASI, TRI_REGULAR,
                      _triangle_matchings)


class QuasiArcPresent(ValueError):
    """Quasi-arcs lift to non-contractible loops; no triangulation lifts."""


@dataclass
class DoubleCover:
    base: QuasiTriangulation
    lifted: QuasiTriangulation
    arc_lift: dict[tuple[int, int], int]     # (base arc, sheet) -> lifted arc
    point_lift: dict[tuple[int, int], int]   # (base point, sheet) -> lifted point
    sigma_arc: dict[int, int]                # deck involution on lifted arcs
    sigma_point: dict[int, int]

    def double_quiver(self) -> PartitionedQuiver:
        return self.lifted.build_quiver()

    def sigma_is_involution(self) -> bool:
        return all(self.sigma_arc[b] == a for a, b in self.sigma_arc.items())

    def sigma_fixed_points(self) -> list[int]:
        return [a for a, b in self.sigma_arc.items() if a == b]

    def is_connected(self) -> bool:
        parent = {p: p for p in self.lifted.walks}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for arc in self.lifted.arcs:
            if self.lifted.arcs[arc] == "quasi":
                continue
            p0, _ = self.lifted.token_position((arc, 0))
            p1, _ = self.lifted.token_position((arc, 1))
            ra, rb = find(p0), find(p1)
            if ra != rb:
                parent[ra] = rb
        return len({find(p) for p in parent}) == 1

    def apply_sigma_to_quiver(self, quiver: PartitionedQuiver) -> PartitionedQuiver:
        """Relabel a quiver built on lifted arc ids by the deck involution."""
        from .pquiver import Arrow, Vertex
        vertices = [Vertex(self.sigma_arc[v.id], v.frozen, v.kind)
                    for v in quiver.vertices.values()]
        arrows = [Arrow(a.id, self.sigma_arc[a.src], self.sigma_arc[a.tgt])
                  for a in quiver.arrows.values()]
        return PartitionedQuiver(vertices, arrows, quiver.partition)


def lift(base: QuasiTriangulation) -> DoubleCover:
    """Lift to the orientable double cover.

    Raises QuasiArcPresent when the input contains a quasi-arc.  The result
    carries no surface signature (it may be orientable or disconnected) but
    validates structurally.
    """
    if base.quasi_arcs():
        raise QuasiArcPresent(
            f"quasi-arcs {base.quasi_arcs()} present; the lift of a quasi-arc "
            "cannot be part of any triangulation")
    base.require_valid()
    rho = base.arc_transport()

    arc_lift = {}
    for i, (a, s) in enumerate(sorted((a, s) for a in base.arcs for s in (0, 1))):
        arc_lift[(a, s)] = i + 1
    point_lift = {}
    for i, (p, s) in enumerate(sorted((p, s) for p in base.points for s in (0, 1))):
        point_lift[(p, s)] = i + 1

    def copy_sheet(arc: int, end: int, point_sheet: int) -> int:
        # the arc copy whose given end sits on the given sheet
        return point_sheet ^ (rho[arc] if end == 1 else 0)

    arcs = {}
    for (a, s), new in arc_lift.items():
        arcs[new] = base.arcs[a]
    points = {}
    for (p, s), new in point_lift.items():
        points[new] = base.points[p] * 2 + s

    walks: dict[int, list] = {}
    for (p, s), new in point_lift.items():
        tokens = base.walks[p] if s == 0 else list(reversed(base.walks[p]))
        walks[new] = [(arc_lift[(a, copy_sheet(a, e, s))], e) for a, e in tokens]

    # lift triangles sheet by sheet via the side-instance structure
    triangles: list[Triangle] = []
    corner_tri: dict[int, list[int]] = {new: [0] * (len(w) - 1)
                                        for new, w in walks.items()}
    next_tri = 1
    tri_lift_pairs: dict[int, list[int]] = {}
    for tri in sorted(base.triangles.values(), key=lambda t: t.id):
        if tri.kind == TRI_QUASI:
            raise QuasiArcPresent("quasi-triangle present")
        slots = base.triangle_corner_slots(tri.id)
        corners = [base.corner_tokens(*s) for s in slots]
        matching = _triangle_matchings(corners)
        if not matching:
            raise InvalidTriangulation(f"triangle {tri.id} has no side matching")
        lifted_slots = []
        for ci, (p, i) in enumerate(slots):
            for s in (0, 1):
                idx = i if s == 0 else len(base.walks[p]) - 2 - i
                lifted_slots.append((ci, s, p, idx))
        parent = {ls[:2]: ls[:2] for ls in lifted_slots}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (c0, m0), (c1, m1) in matching[0]:
            a0, e0 = corners[c0][m0]
            for s in (0, 1):
                for s2 in (0, 1):
                    if copy_sheet(a0, e0, s) == copy_sheet(corners[c1][m1][0],
                                                           corners[c1][m1][1], s2):
                        ra, rb = find((c0, s)), find((c1, s2))
                        if ra != rb:
                            parent[ra] = rb
        groups: dict[tuple, list] = {}
        for ci, s, p, idx in lifted_slots:
            groups.setdefault(find((ci, s)), []).append((ci, s, p, idx))
        if len(groups) != 2 or any(len(g) != 3 for g in groups.values()):
            raise InvalidTriangulation(
                f"triangle {tri.id} does not lift to two triangles")
        ids = []
        for key in sorted(groups, key=lambda k: sorted(groups[k])):
            members = groups[key]
            sides = []
            for (c0, m0), (c1, m1) in matching[0]:
                a0, e0 = corners[c0][m0]
                sheet = next(s for ci, s, _, _ in members if ci == c0)
                sides.append(arc_lift[(a0, copy_sheet(a0, e0, sheet))])
            doubled = len(set(sides)) < len(sides)
            kind = TRI_ANTI_SELF_FOLDED if doubled else TRI_REGULAR
            t = Triangle(next_tri, kind, tuple(sorted(sides)))
            triangles.append(t)
            ids.append(next_tri)
            for ci, s, p, idx in members:
                corner_tri[point_lift[(p, s)]][idx] = next_tri
            next_tri += 1
        tri_lift_pairs[tri.id] = ids

    lifted = QuasiTriangulation(None, arcs, points, walks, corner_tri, triangles)
    sigma_arc = {}
    for (a, s), new in arc_lift.items():
        sigma_arc[new] = arc_lift[(a, 1 - s)]
    sigma_point = {}
    for (p, s), new in point_lift.items():
        sigma_point[new] = point_lift[(p, 1 - s)]
    return DoubleCover(base, lifted, arc_lift, point_lift, sigma_arc, sigma_point)


def double_quiver(cover: DoubleCover) -> PartitionedQuiver:
    return cover.double_quiver()
