"""Combinatorial quasi-triangulations of marked surfaces.

A triangulation is stored as, per marked point, the linear order of incident
arc ends (the walk, running from one boundary-arc end to the next), together
with the assignment of a triangle to every pair of consecutive ends (a
corner).  Triangle side structure, orientation transport along arcs and hence
the orientation double cover are all derivable from this data; no separate
twist bits are stored.

Arc ends are tokens (arc id, 0|1).  Quasi-arcs are closed curves and never
appear in walks; a quasi-triangle claims the corner between the two ends of
its enclosing loop.  An anti-self-folded triangle lists its doubled arc twice
and claims the corner between that arc's own two ends (the tip) plus the two
corners against its base side.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from .pquiver import (ORDINARY, QUASI, Arrow, PartitionedQuiver, Vertex)

BOUNDARY = "boundary"
REGULAR = "regular"
QUASIARC = "quasi"

TRI_REGULAR = "regular"
TRI_ANTI_SELF_FOLDED = "anti-self-folded"
TRI_QUASI = "quasi"

End = tuple[int, int]


class NonTriangulable(ValueError):
    pass


class InvalidTriangulation(ValueError):
    pass


class NotFlippable(ValueError):
    pass


class FlipError(RuntimeError):
    """The local rewrite could not be completed unambiguously."""


@dataclass(frozen=True)
class SurfaceSignature:
    """g crosscaps, b boundary components, p punctures, c boundary points."""

    g: int
    b: int
    p: int
    c: int

    def as_json(self):
        return {"g": self.g, "b": self.b, "p": self.p, "c": self.c}


def arc_count(sig: SurfaceSignature) -> int:
    """Number of internal arcs in any quasi-triangulation: 3g+3b+3p+c-6."""
    if sig.g < 0 or sig.p < 0:
        raise NonTriangulable("negative signature entries")
    if sig.b < 1:
        raise NonTriangulable("at least one boundary component is required")
    if sig.c < sig.b:
        raise NonTriangulable("every boundary component needs a marked point")
    n = 3 * sig.g + 3 * sig.b + 3 * sig.p + sig.c - 6
    if n < 1:
        raise NonTriangulable(
            f"signature {sig} admits no triangulation (monogon/bigon/triangle)")
    return n


def euler_characteristic_nonorientable(k: int, boundaries: int = 0) -> int:
    """Euler characteristic 2-k of genus-k non-orientable surfaces.

    Each boundary component removes one face, so chi drops by `boundaries`.
    """
    if k < 1:
        raise ValueError("non-orientable genus must be at least 1")
    return 2 - k - boundaries


@dataclass(frozen=True)
class Triangle:
    id: int
    kind: str
    sides: tuple[int, ...]  # arc ids; doubled arc listed twice; quasi: (loop, quasi)


def _triangle_matchings(corners: list[tuple[End, End]]):
    """Side matchings of three corner token-pairs.

    Each matching pairs the six token slots into three sides (same arc,
    opposite end labels) forming a 3-cycle over the corners.  Returns a list
    of matchings; a matching is a tuple of three sides, each a pair of
    (corner index, member index) slots.
    """
    out = []
    c = corners
    for s0 in (0, 1):
        for s1 in (0, 1):
            for s2 in (0, 1):
                sides = (
                    ((0, s0), (1, s1)),
                    ((1, 1 - s1), (2, s2)),
                    ((2, 1 - s2), (0, 1 - s0)),
                )
                ok = True
                for (ci, mi), (cj, mj) in sides:
                    u, v = c[ci][mi], c[cj][mj]
                    if u[0] != v[0] or u[1] == v[1]:
                        ok = False
                        break
                if ok:
                    out.append(sides)
    return out


class QuasiTriangulation:
    def __init__(self, signature, arcs, points, walks, corner_tri, triangles,
                 boundary_orientation=None):
        self.signature: SurfaceSignature | None = signature
        self.arcs: dict[int, str] = dict(arcs)
        self.points: dict[int, int] = dict(points)
        self.walks: dict[int, list[End]] = {p: [tuple(t) for t in w]
                                            for p, w in walks.items()}
        self.corner_tri: dict[int, list[int]] = {p: list(v)
                                                 for p, v in corner_tri.items()}
        self.triangles: dict[int, Triangle] = {t.id: t for t in triangles}
        comps = sorted(set(self.points.values()))
        self.boundary_orientation: dict[int, int] = {c: 0 for c in comps}
        if boundary_orientation:
            self.boundary_orientation.update(boundary_orientation)

    # -- basics ---------------------------------------------------------------

    def copy(self) -> "QuasiTriangulation":
        return QuasiTriangulation(
            self.signature, self.arcs, self.points, self.walks,
            self.corner_tri, self.triangles.values(),
            self.boundary_orientation)

    def internal_arcs(self) -> list[int]:
        return sorted(a for a, k in self.arcs.items() if k != BOUNDARY)

    def boundary_arcs(self) -> list[int]:
        return sorted(a for a, k in self.arcs.items() if k == BOUNDARY)

    def quasi_arcs(self) -> list[int]:
        return sorted(a for a, k in self.arcs.items() if k == QUASIARC)

    def fresh_triangle_id(self) -> int:
        return max(self.triangles, default=0) + 1

    def token_position(self, token: End) -> tuple[int, int]:
        for pt, walk in self.walks.items():
            for i, tok in enumerate(walk):
                if tok == token:
                    return pt, i
        raise KeyError(f"token {token} not found in any walk")

    def corner_tokens(self, pt: int, idx: int) -> tuple[End, End]:
        walk = self.walks[pt]
        return walk[idx], walk[idx + 1]

    def triangle_corner_slots(self, tri_id: int) -> list[tuple[int, int]]:
        return [(pt, i) for pt in sorted(self.corner_tri)
                for i, t in enumerate(self.corner_tri[pt]) if t == tri_id]

    # -- validation -------------------------------------------------------------

    def validate(self) -> list[str]:
        out = []
        token_count: dict[End, int] = {}
        for pt, walk in self.walks.items():
            if pt not in self.points:
                out.append(f"walk at unknown point {pt}")
            if len(walk) < 2:
                out.append(f"walk at point {pt} is too short")
                continue
            if len(self.corner_tri.get(pt, [])) != len(walk) - 1:
                out.append(f"corner/walk length mismatch at point {pt}")
            for i, tok in enumerate(walk):
                arc, e = tok
                if arc not in self.arcs:
                    out.append(f"walk at {pt} references unknown arc {arc}")
                    continue
                kind = self.arcs[arc]
                token_count[tok] = token_count.get(tok, 0) + 1
                extreme = i == 0 or i == len(walk) - 1
                if kind == BOUNDARY and not extreme:
                    out.append(f"boundary end {tok} in walk interior at {pt}")
                if kind != BOUNDARY and extreme:
                    out.append(f"non-boundary end {tok} at walk extreme of {pt}")
                if kind == QUASIARC:
                    out.append(f"quasi-arc {arc} appears in a walk")
        for arc, kind in self.arcs.items():
            expect = 0 if kind == QUASIARC else 1
            for e in (0, 1):
                c = token_count.get((arc, e), 0)
                if c != expect:
                    out.append(f"end ({arc},{e}) appears {c} times, expected {expect}")
        if out:
            return out

        # triangle structure
        side_use: dict[int, int] = {a: 0 for a in self.arcs}
        for tri in self.triangles.values():
            slots = self.triangle_corner_slots(tri.id)
            for a in tri.sides:
                if a not in self.arcs:
                    out.append(f"triangle {tri.id} references unknown arc {a}")
                    return out
                side_use[a] += 1
            if tri.kind == TRI_QUASI:
                loop, q = tri.sides
                if self.arcs[q] != QUASIARC:
                    out.append(f"quasi-triangle {tri.id}: {q} is not a quasi-arc")
                if self.arcs[loop] == QUASIARC:
                    out.append(f"quasi-triangle {tri.id}: loop {loop} is a quasi-arc")
                if len(slots) != 1:
                    out.append(f"quasi-triangle {tri.id} has {len(slots)} corners")
                    continue
                u, v = self.corner_tokens(*slots[0])
                if u[0] != loop or v[0] != loop or u[1] == v[1]:
                    out.append(f"quasi-triangle {tri.id}: corner is not the loop's ends")
            else:
                if len(slots) != 3:
                    out.append(f"triangle {tri.id} has {len(slots)} corners")
                    continue
                corners = [self.corner_tokens(*s) for s in slots]
                matchings = _triangle_matchings(corners)
                good = False
                for m in matchings:
                    arcs = sorted(corners[ci][mi][0] for (ci, mi), _ in m)
                    if arcs == sorted(tri.sides):
                        good = True
                        break
                if not good:
                    out.append(f"triangle {tri.id}: corners do not realize sides {tri.sides}")
                doubled = len(set(tri.sides)) < len(tri.sides)
                if doubled != (tri.kind == TRI_ANTI_SELF_FOLDED):
                    out.append(f"triangle {tri.id}: kind {tri.kind} vs sides {tri.sides}")
        for pt, tris in self.corner_tri.items():
            for i, t in enumerate(tris):
                if t not in self.triangles:
                    out.append(f"corner ({pt},{i}) assigned to unknown triangle {t}")
        for arc, kind in self.arcs.items():
            want = 2 if kind == REGULAR else 1
            if side_use[arc] != want:
                out.append(f"arc {arc} fills {side_use[arc]} side slots, expected {want}")
        if self.signature is not None:
            if self.signature.p != 0:
                out.append("punctured signatures are not supported by the engine")
            else:
                try:
                    n = arc_count(self.signature)
                except NonTriangulable as exc:
                    out.append(str(exc))
                else:
                    have = len(self.internal_arcs())
                    if have != n:
                        out.append(f"internal arc count {have} != {n} from signature")
        for pt, comp in self.points.items():
            if comp not in self.boundary_orientation:
                out.append(f"point {pt} on unknown boundary component {comp}")
        return out

    def require_valid(self):
        diags = self.validate()
        if diags:
            raise InvalidTriangulation("; ".join(diags))

    # -- quiver construction ------------------------------------------------------

    def build_quiver(self) -> PartitionedQuiver:
        """One mutable vertex per internal arc, one frozen per boundary arc;
        one partition path per marked point, following its walk."""
        self.require_valid()
        vertices = []
        for a in sorted(self.arcs):
            kind = self.arcs[a]
            vertices.append(Vertex(a, frozen=(kind == BOUNDARY),
                                   kind=QUASI if kind == QUASIARC else ORDINARY))
        arrows = []
        partition = []
        aid = 1
        for pt in sorted(self.walks):
            walk = list(self.walks[pt])
            tris = list(self.corner_tri[pt])
            if self.boundary_orientation[self.points[pt]]:
                walk.reverse()
                tris.reverse()
            path = []
            for i in range(len(walk) - 1):
                a, b = walk[i][0], walk[i + 1][0]
                tri = self.triangles[tris[i]]
                if tri.kind == TRI_QUASI:
                    loop, q = tri.sides
                    arrows.append(Arrow(aid, a, q))
                    arrows.append(Arrow(aid + 1, q, b))
                    path.extend([aid, aid + 1])
                    aid += 2
                else:
                    arrows.append(Arrow(aid, a, b))
                    path.append(aid)
                    aid += 1
            partition.append(path)
        return PartitionedQuiver(vertices, arrows, partition)

    # -- orientation transport -------------------------------------------------------

    def side_instance_map(self) -> dict[tuple[int, int, int], tuple]:
        """Map (point, corner idx, member 0|1) -> side instance key.

        A side instance is one side of one triangle; its two corner slots sit
        at opposite ends of the side's arc.  Quasi-triangles contribute the
        loop side as a single instance over their one corner.
        """
        inst: dict[tuple[int, int, int], tuple] = {}
        for tri in self.triangles.values():
            slots = self.triangle_corner_slots(tri.id)
            if tri.kind == TRI_QUASI:
                (pt, i), = slots
                inst[(pt, i, 0)] = (tri.id, 0)
                inst[(pt, i, 1)] = (tri.id, 0)
                continue
            corners = [self.corner_tokens(*s) for s in slots]
            matchings = _triangle_matchings(corners)
            if not matchings:
                raise InvalidTriangulation(f"triangle {tri.id} has no side matching")
            for k, side in enumerate(matchings[0]):
                for ci, mi in side:
                    pt, i = slots[ci]
                    inst[(pt, i, mi)] = (tri.id, k)
        return inst

    def arc_transport(self) -> dict[int, int]:
        """Per internal two-ended arc: 1 if crossing it reverses orientation.

        The side instance seen on the walk-left of the arc's end-0 token
        equals the one on the walk-left of its end-1 token exactly when the
        gluing is orientation-reversing (relative to the stored walk
        directions; boundary arcs transport trivially by the walk convention).
        """
        inst = self.side_instance_map()
        out: dict[int, int] = {}
        for arc, kind in self.arcs.items():
            if kind == QUASIARC:
                continue
            if kind == BOUNDARY:
                out[arc] = 0
                continue
            lefts = []
            for e in (0, 1):
                pt, i = self.token_position((arc, e))
                # member 1 of corner i-1 and member 0 of corner i touch token i
                lefts.append(inst[(pt, i - 1, 1)])
            out[arc] = 1 if lefts[0] == lefts[1] else 0
        return out

    # -- flips ---------------------------------------------------------------------

    def flip(self, arc: int) -> "QuasiTriangulation":
        """Replace `arc` by the unique other arc completing a quasi-triangulation.

        The arc id is reused for the replacement arc.  Functional.
        """
        if arc not in self.arcs:
            raise KeyError(f"unknown arc {arc}")
        kind = self.arcs[arc]
        if kind == BOUNDARY:
            raise NotFlippable(f"arc {arc} is a boundary arc")
        t = self.copy()
        if kind == QUASIARC:
            t._flip_quasi_arc(arc)
            return t
        p0, i0 = t.token_position((arc, 0))
        p1, i1 = t.token_position((arc, 1))
        if p0 == p1 and abs(i0 - i1) == 1:
            mid = min(i0, i1)
            tri = t.triangles[t.corner_tri[p0][mid]]
            if tri.kind == TRI_QUASI:
                t._flip_quasi_loop(arc, tri, p0, mid)
            elif tri.kind == TRI_ANTI_SELF_FOLDED:
                t._flip_doubled(arc, tri, p0, mid)
            else:
                raise InvalidTriangulation(
                    f"adjacent ends of {arc} claim a regular corner")
        else:
            t._flip_quadrilateral(arc, (p0, i0), (p1, i1))
        return t

    def _flip_quasi_arc(self, arc: int):
        """Quasi-arc -> doubled arc of an anti-self-folded triangle."""
        qt = next(tr for tr in self.triangles.values()
                  if tr.kind == TRI_QUASI and tr.sides[1] == arc)
        loop = qt.sides[0]
        (pt, i), = self.triangle_corner_slots(qt.id)
        af = Triangle(self.fresh_triangle_id(), TRI_ANTI_SELF_FOLDED,
                      (loop, arc, arc))
        self.walks[pt][i + 1:i + 1] = [(arc, 0), (arc, 1)]
        self.corner_tri[pt][i:i + 1] = [af.id, af.id, af.id]
        del self.triangles[qt.id]
        self.triangles[af.id] = af
        self.arcs[arc] = REGULAR

    def _flip_doubled(self, arc: int, af: Triangle, pt: int, mid: int):
        """Doubled arc of an anti-self-folded triangle -> quasi-arc."""
        if list(af.sides).count(arc) != 2:
            raise InvalidTriangulation(f"arc {arc} is not doubled in triangle {af.id}")
        base = next(a for a in af.sides if a != arc)
        walk = self.walks[pt]
        if walk[mid - 1][0] != base or walk[mid + 2][0] != base:
            raise InvalidTriangulation(
                f"anti-self-folded triangle {af.id} not flanked by its base")
        qt = Triangle(self.fresh_triangle_id(), TRI_QUASI, (base, arc))
        del self.walks[pt][mid:mid + 2]
        self.corner_tri[pt][mid - 1:mid + 2] = [qt.id]
        del self.triangles[af.id]
        self.triangles[qt.id] = qt
        self.arcs[arc] = QUASIARC

    def _flip_quasi_loop(self, arc: int, qt: Triangle, pt: int, mid: int):
        """Re-hang the enclosing loop of a quasi-triangle at the far corner."""
        walk = self.walks[pt]
        tris = self.corner_tri[pt]
        if tris[mid - 1] != tris[mid + 1]:
            raise InvalidTriangulation(
                f"loop {arc} is not flanked by a single triangle")
        delta = self.triangles[tris[mid - 1]]
        if delta.kind != TRI_REGULAR:
            raise FlipError(
                f"enclosing loop {arc} sits against a {delta.kind} triangle; "
                "this configuration is outside the supported class")
        del walk[mid:mid + 2]
        tris[mid - 1:mid + 2] = [delta.id]
        third = [(p, i) for (p, i) in self.triangle_corner_slots(delta.id)
                 if not (p == pt and i == mid - 1)]
        if len(third) != 1:
            raise FlipError(f"triangle {delta.id} third corner not unique")
        (p2, j), = third
        self.walks[p2][j + 1:j + 1] = [(arc, 0), (arc, 1)]
        self.corner_tri[p2][j:j + 1] = [delta.id, qt.id, delta.id]

    def _flip_quadrilateral(self, arc: int, pos0, pos1):
        """Generic diagonal flip; covers plain quadrilaterals, quadrilaterals
        with a repeated side, and the base arc of an anti-self-folded
        triangle, which all share the same corner rewrite."""
        (p0, i0), (p1, i1) = pos0, pos1
        flank_slots = [(p0, i0 - 1), (p0, i0), (p1, i1 - 1), (p1, i1)]
        flank_tris = [self.corner_tri[p][i] for p, i in flank_slots]
        distinct = sorted(set(flank_tris))
        if len(distinct) != 2 or any(flank_tris.count(t) != 2 for t in distinct):
            raise InvalidTriangulation(
                f"arc {arc}: flanking corners belong to {distinct}")
        t1, t2 = distinct
        for t in (t1, t2):
            if self.triangles[t].kind == TRI_QUASI:
                raise InvalidTriangulation(f"arc {arc} flanked by quasi-triangle")

        merged_marker = -1
        removals = sorted([(p0, i0), (p1, i1)], reverse=True)
        for p, i in removals:
            del self.walks[p][i]
            self.corner_tri[p][i - 1:i + 1] = [merged_marker]
        merged_slots = []
        for p in self.corner_tri:
            for i, v in enumerate(self.corner_tri[p]):
                if v == merged_marker:
                    merged_slots.append((p, i))
        # the remaining slot of t1 / t2 is its third corner
        thirds = {}
        for t in (t1, t2):
            rest = self.triangle_corner_slots(t)
            if len(rest) != 1:
                raise FlipError(f"triangle {t} third corner not unique")
            thirds[t] = rest[0]
        half_marker = {t1: -2, t2: -3}
        for e, t in ((0, t1), (1, t2)):
            p, j = thirds[t]
            self.walks[p][j + 1:j + 1] = [(arc, e)]
            self.corner_tri[p][j:j + 1] = [half_marker[t], half_marker[t]]
            # inserting may shift the other pending slots
            merged_slots = [(q, i if not (q == p and i > j) else i + 1)
                            for q, i in merged_slots]
            for tt in thirds:
                qq, jj = thirds[tt]
                if qq == p and jj > j:
                    thirds[tt] = (qq, jj + 1)

        def half_slots(marker):
            return [(p, i) for p in self.corner_tri
                    for i, v in enumerate(self.corner_tri[p]) if v == marker]

        halves1 = half_slots(-2)
        halves2 = half_slots(-3)
        assert len(merged_slots) == 2 and len(halves1) == 2 and len(halves2) == 2

        solutions = []
        for k1 in (0, 1):
            for k2 in (0, 1):
                tri_a = [merged_slots[0], halves1[k1], halves2[k2]]
                tri_b = [merged_slots[1], halves1[1 - k1], halves2[1 - k2]]
                sides = []
                ok = True
                for slots in (tri_a, tri_b):
                    corners = [self.corner_tokens(*s) for s in slots]
                    ms = _triangle_matchings(corners)
                    if not ms:
                        ok = False
                        break
                    sides.append(sorted(corners[ci][mi][0] for (ci, mi), _ in ms[0]))
                if ok:
                    solutions.append((tri_a, tri_b, sides))
        if not solutions:
            raise FlipError(f"arc {arc}: no consistent corner reassignment")
        if len(solutions) > 1:
            keys = {tuple(map(tuple, s[2])) for s in solutions}
            if len(keys) > 1:
                raise FlipError(f"arc {arc}: ambiguous corner reassignment")
        tri_a, tri_b, sides = solutions[0]
        na, nb = self.fresh_triangle_id(), self.fresh_triangle_id() + 1
        del self.triangles[t1]
        del self.triangles[t2]
        for new_id, slots, side in ((na, tri_a, sides[0]), (nb, tri_b, sides[1])):
            doubled = len(set(side)) < len(side)
            kind = TRI_ANTI_SELF_FOLDED if doubled else TRI_REGULAR
            if doubled:
                dup = next(a for a in side if side.count(a) == 2)
                base = next(a for a in side if a != dup)
                side = [base, dup, dup]
            self.triangles[new_id] = Triangle(new_id, kind, tuple(side))
            for p, i in slots:
                self.corner_tri[p][i] = new_id

    # -- serialization ----------------------------------------------------------------

    def to_json(self) -> dict:
        transport = self.arc_transport()
        seen: set[int] = set()
        triangles = []
        for tri in sorted(self.triangles.values(), key=lambda t: t.id):
            sides = []
            for a in tri.sides:
                twist = 0
                if self.arcs[a] == REGULAR and a in seen:
                    twist = transport.get(a, 0)
                seen.add(a)
                sides.append({"arc": a, "twist": twist})
            triangles.append({"id": tri.id, "kind": tri.kind, "sides": sides})
        return {
            "signature": self.signature.as_json() if self.signature else None,
            "arcs": [{"id": a, "kind": self.arcs[a]} for a in sorted(self.arcs)],
            "triangles": triangles,
            "corners": {str(pt): [{"arc": a, "end": e} for a, e in walk]
                        for pt, walk in sorted(self.walks.items())},
            "corner_triangles": {str(pt): list(v)
                                 for pt, v in sorted(self.corner_tri.items())},
            "points": {str(pt): comp for pt, comp in sorted(self.points.items())},
            "boundary_orientations": [self.boundary_orientation[c]
                                      for c in sorted(self.boundary_orientation)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuasiTriangulation":
        sig = None
        if data.get("signature"):
            s = data["signature"]
            sig = SurfaceSignature(s["g"], s["b"], s["p"], s["c"])
        arcs = {a["id"]: a["kind"] for a in data["arcs"]}
        points = {int(p): comp for p, comp in data["points"].items()}
        walks = {int(p): [(t["arc"], t["end"]) for t in w]
                 for p, w in data["corners"].items()}
        triangles = [Triangle(t["id"], t["kind"],
                              tuple(s["arc"] for s in t["sides"]))
                     for t in data["triangles"]]
        if "corner_triangles" in data:
            corner_tri = {int(p): list(v)
                          for p, v in data["corner_triangles"].items()}
        else:
            corner_tri = _assign_corners(arcs, walks, triangles)
        comps = sorted(set(points.values()))
        orientation = dict(zip(comps, data.get("boundary_orientations", [])))
        return cls(sig, arcs, points, walks, corner_tri, triangles, orientation)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _assign_corners(arcs, walks, triangles) -> dict[int, list[int]]:
    """Reconstruct the corner-to-triangle assignment by backtracking.

    Used when importing JSON without the explicit corner_triangles field.
    """
    slots = [(pt, i) for pt in sorted(walks) for i in range(len(walks[pt]) - 1)]
    demand: dict[int, int] = {}
    for tri in triangles:
        demand[tri.id] = 1 if tri.kind == TRI_QUASI else 3
    assignment: dict[tuple[int, int], int] = {}

    def corner_arcs(slot):
        pt, i = slot
        return walks[pt][i][0], walks[pt][i + 1][0]

    def candidates(slot):
        a, b = corner_arcs(slot)
        cands = []
        for tri in triangles:
            if demand[tri.id] <= 0:
                continue
            if tri.kind == TRI_QUASI:
                loop = tri.sides[0]
                if a == loop and b == loop:
                    cands.append(tri.id)
            else:
                sides = list(tri.sides)
                if a in sides:
                    rest = sides.copy()
                    rest.remove(a)
                    if b in rest:
                        cands.append(tri.id)
        return cands

    def solve(k):
        if k == len(slots):
            return all(v == 0 for v in demand.values())
        slot = slots[k]
        for tid in candidates(slot):
            assignment[slot] = tid
            demand[tid] -= 1
            if solve(k + 1):
                return True
            demand[tid] += 1
            del assignment[slot]
        return False

    if not solve(0):
        raise InvalidTriangulation("cannot assign corners to triangles")
    out: dict[int, list[int]] = {pt: [0] * (len(walks[pt]) - 1) for pt in walks}
    for (pt, i), tid in assignment.items():
        out[pt][i] = tid
    return out


# -- fixtures ---------------------------------------------------------------------


def polygon_fan(c: int) -> QuasiTriangulation:
    """Fan triangulation of the disk with c boundary points (c >= 4)."""
    sig = SurfaceSignature(0, 1, 0, c)
    n = arc_count(sig)  # c - 3
    diag = {j: j - 2 for j in range(3, c)}          # arc ids 1..c-3
    bnd = {i: n + i for i in range(1, c + 1)}       # boundary b_i: pt i -> i+1
    arcs = {diag[j]: REGULAR for j in diag}
    arcs.update({bnd[i]: BOUNDARY for i in bnd})
    tri_of = {}  # triangle U_j for j = 2..c-1
    tris = []
    tid = 1
    for j in range(2, c):
        if j == 2:
            sides = (bnd[1], bnd[2], diag[3])
        elif j == c - 1:
            sides = (diag[c - 1], bnd[c - 1], bnd[c])
        else:
            sides = (diag[j], bnd[j], diag[j + 1])
        tris.append(Triangle(tid, TRI_REGULAR, sides))
        tri_of[j] = tid
        tid += 1
    walks = {}
    corner = {}
    w1 = [(bnd[c], 1)] + [(diag[j], 0) for j in range(c - 1, 2, -1)] + [(bnd[1], 0)]
    c1 = [tri_of[c - 1]] + [tri_of[j] for j in range(c - 2, 1, -1)]
    walks[1], corner[1] = w1, c1
    walks[2] = [(bnd[1], 1), (bnd[2], 0)]
    corner[2] = [tri_of[2]]
    for j in range(3, c):
        walks[j] = [(bnd[j - 1], 1), (diag[j], 1), (bnd[j], 0)]
        corner[j] = [tri_of[j - 1], tri_of[j]]
    walks[c] = [(bnd[c - 1], 1), (bnd[c], 0)]
    corner[c] = [tri_of[c - 1]]
    points = {i: 0 for i in range(1, c + 1)}
    return QuasiTriangulation(sig, arcs, points, walks, corner, tris)


def mobius_fan(n: int) -> QuasiTriangulation:
    """Fan quasi-triangulation of the Moebius strip with n boundary points.

    An enclosing loop and a doubled arc through the crosscap at point 1, plus
    n-2 fan arcs from point 1 (for n = 1 the loop degenerates onto the
    boundary and only the doubled arc remains).
    """
    if n < 1:
        raise NonTriangulable("need at least one marked point")
    sig = SurfaceSignature(1, 1, 0, n)
    arc_count(sig)
    if n == 1:
        b = 2
        arcs = {1: REGULAR, b: BOUNDARY}
        af = Triangle(1, TRI_ANTI_SELF_FOLDED, (b, 1, 1))
        walks = {1: [(b, 1), (1, 0), (1, 1), (b, 0)]}
        corner = {1: [1, 1, 1]}
        return QuasiTriangulation(sig, arcs, {1: 0}, walks, corner, [af])
    loop, dbl = 1, 2
    fan = {j: j + 1 for j in range(2, n)}            # fan arc pt1 -> pt j
    bnd = {i: n + i for i in range(1, n + 1)}        # boundary b_i: pt i -> i+1
    arcs = {loop: REGULAR, dbl: REGULAR}
    arcs.update({fan[j]: REGULAR for j in fan})
    arcs.update({bnd[i]: BOUNDARY for i in bnd})
    af = Triangle(1, TRI_ANTI_SELF_FOLDED, (loop, dbl, dbl))
    tris = [af]
    tri_of = {}
    tid = 2
    for j in range(1, n):
        if n == 2:
            sides = (loop, bnd[1], bnd[2])
        elif j == 1:
            sides = (loop, bnd[1], fan[2])
        elif j == n - 1:
            sides = (fan[n - 1], bnd[n - 1], bnd[n])
        else:
            sides = (fan[j], bnd[j], fan[j + 1])
        tris.append(Triangle(tid, TRI_REGULAR, sides))
        tri_of[j] = tid
        tid += 1
    walks = {}
    corner = {}
    w1 = [(bnd[n], 1)]
    c1 = []
    for j in range(n - 1, 1, -1):
        w1.append((fan[j], 0))
        c1.append(tri_of[j] if j < n - 1 else tri_of[n - 1])
    w1 += [(loop, 0), (dbl, 0), (dbl, 1), (loop, 1), (bnd[1], 0)]
    c1 += [tri_of[1], af.id, af.id, af.id, tri_of[1]]
    walks[1], corner[1] = w1, c1
    for i in range(2, n + 1):
        w = [(bnd[i - 1], 1)]
        cs = []
        if i in fan:
            w.append((fan[i], 1))
            cs.append(tri_of[i - 1])
            cs.append(tri_of[i])
        else:
            cs.append(tri_of[i - 1])
        w.append((bnd[i], 0))
        walks[i], corner[i] = w, cs
    points = {i: 0 for i in range(1, n + 1)}
    return QuasiTriangulation(sig, arcs, points, walks, corner, tris)


def annulus_crosscap() -> QuasiTriangulation:
    """Annulus with one crosscap, two marked points, five internal arcs.

    Arc 4 is the loop enclosing the quasi-arc 5; arcs 6 and 7 are the outer
    and inner boundary circles.
    """
    sig = SurfaceSignature(1, 2, 0, 2)
    arcs = {1: REGULAR, 2: REGULAR, 3: REGULAR, 4: REGULAR, 5: QUASIARC,
            6: BOUNDARY, 7: BOUNDARY}
    ta = Triangle(1, TRI_REGULAR, (1, 2, 7))
    tb = Triangle(2, TRI_REGULAR, (1, 3, 6))
    tc = Triangle(3, TRI_REGULAR, (2, 3, 4))
    qt = Triangle(4, TRI_QUASI, (4, 5))
    walks = {
        1: [(6, 0), (3, 0), (2, 0), (1, 0), (6, 1)],
        2: [(7, 0), (1, 1), (3, 1), (4, 0), (4, 1), (2, 1), (7, 1)],
    }
    corner = {
        1: [tb.id, tc.id, ta.id, tb.id],
        2: [ta.id, tb.id, tc.id, qt.id, tc.id, ta.id],
    }
    points = {1: 0, 2: 1}
    return QuasiTriangulation(sig, arcs, points, walks, corner, [ta, tb, tc, qt])


def mobius_three_arc() -> QuasiTriangulation:
    """Moebius strip with three marked points, all arcs through the crosscap.

    Arc 1 is doubled at point 1; arcs 2 and 3 run from point 1 to points 2
    and 3.  Quasi-arc free, so it lifts to the orientable double cover.
    """
    sig = SurfaceSignature(1, 1, 0, 3)
    arcs = {1: REGULAR, 2: REGULAR, 3: REGULAR,
            4: BOUNDARY, 5: BOUNDARY, 6: BOUNDARY}
    ta = Triangle(1, TRI_REGULAR, (4, 1, 2))
    tb = Triangle(2, TRI_REGULAR, (1, 3, 6))
    tc = Triangle(3, TRI_REGULAR, (2, 3, 5))
    walks = {
        1: [(4, 1), (1, 0), (3, 0), (2, 0), (1, 1), (6, 0)],
        2: [(5, 1), (2, 1), (4, 0)],
        3: [(6, 1), (3, 1), (5, 0)],
    }
    corner = {
        1: [ta.id, tb.id, tc.id, ta.id, tb.id],
        2: [tc.id, ta.id],
        3: [tb.id, tc.id],
    }
    points = {1: 0, 2: 0, 3: 0}
    return QuasiTriangulation(sig, arcs, points, walks, corner, [ta, tb, tc])


def three_boundary() -> QuasiTriangulation:
    """Orientable surface with three boundary circles, one point each.

    Six internal arcs; the three marked points drive partition paths of six,
    five and four arrows.
    """
    sig = SurfaceSignature(0, 3, 0, 3)
    arcs = {a: REGULAR for a in range(1, 7)}
    arcs.update({7: BOUNDARY, 8: BOUNDARY, 9: BOUNDARY})
    t1 = Triangle(1, TRI_REGULAR, (7, 1, 2))
    t2 = Triangle(2, TRI_REGULAR, (1, 6, 9))
    t3 = Triangle(3, TRI_REGULAR, (4, 5, 6))
    t4 = Triangle(4, TRI_REGULAR, (3, 4, 8))
    t5 = Triangle(5, TRI_REGULAR, (2, 3, 5))
    walks = {
        1: [(7, 0), (1, 0), (6, 0), (4, 0), (3, 0), (2, 0), (7, 1)],
        2: [(9, 0), (1, 1), (2, 1), (5, 0), (6, 1), (9, 1)],
        3: [(8, 0), (4, 1), (5, 1), (3, 1), (8, 1)],
    }
    corner = {
        1: [t1.id, t2.id, t3.id, t4.id, t5.id, t1.id],
        2: [t2.id, t1.id, t5.id, t3.id, t2.id],
        3: [t4.id, t3.id, t5.id, t4.id],
    }
    points = {1: 0, 2: 1, 3: 2}
    return QuasiTriangulation(sig, arcs, points, walks, corner,
                              [t1, t2, t3, t4, t5])


FIXTURES = {
    "mobius": mobius_fan,
    "polygon": polygon_fan,
}


def named_fixture(name: str) -> QuasiTriangulation:
    """Fixture lookup: 'mobius:N', 'polygon:C', 'annulus-crosscap',
    'mobius-three-arc'."""
    if name == "annulus-crosscap":
        return annulus_crosscap()
    if name == "mobius-three-arc":
        return mobius_three_arc()
    if name == "three-boundary":
        return three_boundary()
    if ":" in name:
        base, arg = name.split(":", 1)
        if base in FIXTURES:
            return FIXTURES[base](int(arg))
    raise KeyError(f"unknown fixture {name!r}")
