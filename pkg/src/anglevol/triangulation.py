"""Combinatorics of a triangulated closed 3-manifold.

A triangulation is a set of abstract tetrahedra with vertices 0..3 and a
face-gluing table: face f of a tetrahedron (the face opposite vertex f) is
glued to a face of another (or the same) tetrahedron by a permutation of all
four vertex labels.  From the gluings we derive the identification classes
of edges and vertices, the vertex-link surfaces, and their Euler
characteristics, which certify that the complex is a closed 3-manifold.

File format (UTF-8, line oriented, '#' comments, blank lines ignored):

    anglevol-tri v1
    tets <n>
    g <t> <f> <t'> <p0><p1><p2><p3>

One ``g`` line per (tet, face); the line says vertex v of tet t maps to
vertex p_v of tet t'.  The two lines describing one geometric face must
carry mutually inverse permutations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .tetra import SLOT_PAIRS

MAGIC = "anglevol-tri v1"

Perm = tuple[int, int, int, int]


class TriangulationError(ValueError):
    """Base class for triangulation input problems."""


class ParseError(TriangulationError):
    """Malformed file; message carries line and column information."""


class GluingInconsistencyError(TriangulationError):
    """Gluing table is not an involution or glues a face to itself."""


class UngluedFaceError(TriangulationError):
    """Some (tet, face) has no gluing line."""


class BadLinkError(TriangulationError):
    """A vertex link is not a sphere; not a closed 3-manifold."""


def _invert(p: Perm) -> Perm:
    inv = [0] * 4
    for i, pi in enumerate(p):
        inv[pi] = i
    return tuple(inv)


@dataclass(frozen=True)
class EdgeClass:
    """Identification class of tetrahedron edges.

    members lists (tet, (a, b)) corners in the cyclic order of the walk
    around the edge; valence is the member count.
    """

    index: int
    members: tuple[tuple[int, tuple[int, int]], ...]

    @property
    def valence(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class VertexClass:
    """Identification class of tetrahedron vertices with its link surface."""

    index: int
    members: tuple[tuple[int, int], ...]
    link_euler: int


@dataclass
class Triangulation:
    """Immutable-after-construction gluing table plus derived classes."""

    n_tets: int
    gluings: dict[tuple[int, int], tuple[int, Perm]]
    edge_classes: tuple[EdgeClass, ...] = field(default_factory=tuple)
    vertex_classes: tuple[VertexClass, ...] = field(default_factory=tuple)

    @property
    def is_one_vertex(self) -> bool:
        return len(self.vertex_classes) == 1

    @property
    def is_closed_manifold(self) -> bool:
        return all(v.link_euler == 2 for v in self.vertex_classes)

    def edge_class_of(self, tet: int, pair: tuple[int, int]) -> int:
        return self._edge_lookup[(tet, tuple(sorted(pair)))]

    def __post_init__(self):
        self._edge_lookup = {}
        for ec in self.edge_classes:
            for tet, pair in ec.members:
                self._edge_lookup[(tet, pair)] = ec.index


def build(n_tets: int, gluing_list) -> Triangulation:
    """Assemble and validate a triangulation from (t, f, t2, perm) entries."""
    if n_tets < 1:
        raise ParseError("need at least one tetrahedron")
    gluings: dict[tuple[int, int], tuple[int, Perm]] = {}
    for t, f, t2, perm in gluing_list:
        for v in (t, t2):
            if not 0 <= v < n_tets:
                raise GluingInconsistencyError(f"tet index {v} out of range")
        if not (0 <= f < 4):
            raise GluingInconsistencyError(f"face index {f} out of range")
        if sorted(perm) != [0, 1, 2, 3]:
            raise GluingInconsistencyError(f"{perm} is not a permutation of 0..3")
        key = (t, f)
        if key in gluings:
            raise GluingInconsistencyError(f"face {key} glued twice")
        gluings[key] = (t2, tuple(perm))
    _validate_gluings(n_tets, gluings)
    edges = _edge_classes(n_tets, gluings)
    verts = _vertex_classes(n_tets, gluings, edges)
    return Triangulation(n_tets, gluings, edges, verts)


def _validate_gluings(n_tets: int, gluings) -> None:
    for t in range(n_tets):
        for f in range(4):
            if (t, f) not in gluings:
                raise UngluedFaceError(f"face {f} of tet {t} is unglued")
    for (t, f), (t2, p) in gluings.items():
        f2 = p[f]
        if (t2, f2) == (t, f):
            raise GluingInconsistencyError(f"face {f} of tet {t} glued to itself")
        back = gluings.get((t2, f2))
        if back != (t, _invert(p)):
            raise GluingInconsistencyError(
                f"gluing of face {f2} of tet {t2} is not the inverse of "
                f"face {f} of tet {t}"
            )


def _edge_classes(n_tets, gluings) -> tuple[EdgeClass, ...]:
    """Orbits of tet edges, each traversed by walking around the edge.

    From a wedge (t, {a, b}) one leaves through one of the two faces
    containing the edge; the walk enumerates the corners in cyclic order.  A
    walk revisiting a wedge before closing would mean the edge is identified
    with itself reversely, which this model rejects.
    """
    classes = []
    seen: set[tuple[int, tuple[int, int]]] = set()
    for t0 in range(n_tets):
        for pair0 in SLOT_PAIRS:
            if (t0, pair0) in seen:
                continue
            # exit faces are the two vertices not on the edge
            exit0 = [v for v in range(4) if v not in pair0][0]
            members = []
            t, pair, exit_face = t0, pair0, exit0
            while True:
                members.append((t, pair))
                t2, p = gluings[(t, exit_face)]
                pair2 = tuple(sorted((p[pair[0]], p[pair[1]])))
                enter2 = p[exit_face]
                exit2 = [v for v in range(4) if v not in pair2 and v != enter2][0]
                t, pair, exit_face = t2, pair2, exit2
                if (t, pair) == (t0, pair0) and exit_face == exit0:
                    break
                if len(members) > 6 * n_tets:
                    raise GluingInconsistencyError(
                        f"walk around edge {pair0} of tet {t0} does not close"
                    )
            if len(set(members)) != len(members):
                raise GluingInconsistencyError(
                    f"edge {pair0} of tet {t0} is identified with itself "
                    "in reverse"
                )
            seen.update(members)
            classes.append(EdgeClass(len(classes), tuple(members)))
    return tuple(classes)


def _vertex_classes(n_tets, gluings, edge_classes) -> tuple[VertexClass, ...]:
    """Vertex orbits plus the Euler characteristic of each link surface.

    The link of a vertex class is tiled by one triangle per incident tet
    corner; triangle sides are identified across face gluings, and link
    vertices are orbits of directed edge germs (t, v, w).
    """
    # union-find over corners (t, v)
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    corners = [(t, v) for t in range(n_tets) for v in range(4)]
    for c in corners:
        parent[c] = c
    germs = [(t, v, w) for t in range(n_tets) for v in range(4) for w in range(4) if v != w]
    gparent = {g: g for g in germs}

    def gfind(x):
        while gparent[x] != x:
            gparent[x] = gparent[gparent[x]]
            x = gparent[x]
        return x

    def gunion(x, y):
        rx, ry = gfind(x), gfind(y)
        if rx != ry:
            gparent[rx] = ry

    for (t, f), (t2, p) in gluings.items():
        for v in range(4):
            if v != f:
                union((t, v), (t2, p[v]))
        for v in range(4):
            for w in range(4):
                if v != w and v != f and w != f:
                    gunion((t, v, w), (t2, p[v], p[w]))

    classes = {}
    for c in corners:
        classes.setdefault(find(c), []).append(c)

    out = []
    for root, members in sorted(classes.items()):
        # link triangles: one per corner; sides: (t, v, f) for faces f != v,
        # glued in pairs; vertices: germ orbits based at this class
        n_faces = len(members)
        n_sides = 3 * n_faces  # each side glued to exactly one partner
        if n_sides % 2:
            raise BadLinkError("odd side count in a vertex link")
        n_edges = n_sides // 2
        germ_orbits = {gfind((t, v, w)) for (t, v) in members for w in range(4) if w != v}
        chi = len(germ_orbits) - n_edges + n_faces
        out.append(VertexClass(len(out), tuple(sorted(members)), chi))
    return tuple(out)


def vertex_classes_and_links(tri: Triangulation, strict: bool = True):
    """Vertex classes with link Euler characteristics.

    With strict=True a non-sphere link raises BadLinkError; otherwise the
    caller inspects is_closed_manifold itself.
    """
    if strict:
        for vc in tri.vertex_classes:
            if vc.link_euler != 2:
                raise BadLinkError(
                    f"vertex class {vc.index} has link Euler characteristic "
                    f"{vc.link_euler}, not 2"
                )
    return tri.vertex_classes


def parse(text: str) -> Triangulation:
    """Parse the line-oriented gluing format and validate eagerly."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((lineno, stripped))
    if not lines:
        raise ParseError("line 1: empty file, expected header "
                         f"'{MAGIC}'")
    if lines[0][1] != MAGIC:
        raise ParseError(f"line {lines[0][0]}: expected header '{MAGIC}'")
    if len(lines) < 2 or not lines[1][1].startswith("tets "):
        raise ParseError("line 2: expected 'tets <n>'")
    try:
        n_tets = int(lines[1][1].split()[1])
    except (IndexError, ValueError):
        raise ParseError(f"line {lines[1][0]}: expected 'tets <n>'") from None
    gluing_list = []
    for lineno, line in lines[2:]:
        parts = line.split()
        if parts[0] != "g" or len(parts) != 5:
            raise ParseError(f"line {lineno}: expected 'g <t> <f> <t2> <perm>'")
        try:
            t, f, t2 = int(parts[1]), int(parts[2]), int(parts[3])
            perm = tuple(int(ch) for ch in parts[4])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer field") from None
        if len(perm) != 4:
            raise ParseError(f"line {lineno}: permutation needs four digits")
        gluing_list.append((t, f, t2, perm))
    try:
        return build(n_tets, gluing_list)
    except TriangulationError:
        raise


def serialize(tri: Triangulation) -> str:
    """Canonical text form: header, tet count, gluings sorted by (tet, face)."""
    out = [MAGIC, f"tets {tri.n_tets}"]
    for (t, f) in sorted(tri.gluings):
        t2, p = tri.gluings[(t, f)]
        out.append(f"g {t} {f} {t2} {''.join(map(str, p))}")
    return "\n".join(out) + "\n"


def load(path) -> Triangulation:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())
