"""Exact integer lattice geometry: exponent matrices, convex hulls, cones,
face lattices, saturated span lattices, normalized volumes, Smith normal
form, and nonconfluence utilities.

Everything here is exact: integers and Fractions only, no floating point.
Face enumeration is brute force over supporting hyperplanes spanned by
subsets of the input points/generators, which is the right trade-off at
desk scale (ambient dimension <= 6, <= 16 generators).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import networkx as nx

__all__ = [
    "ExponentMatrix",
    "GradedPoset",
    "Face",
    "FaceLattice",
    "LatticePolytope",
    "RationalCone",
    "Sublattice",
    "hull",
    "positive_hull",
    "cone_from_generators",
    "span_lattice",
    "cone_of_face",
    "quotient_cone",
    "poly_of_cone",
    "normalized_volume",
    "smith_normal_form",
    "nonconfluence_vector",
    "extend_to_unimodular",
    "integer_det",
    "matrix_rank",
]

Vec = tuple[int, ...]


# ---------------------------------------------------------------------------
# exact linear algebra helpers


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column indices)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def matrix_rank(rows: Sequence[Sequence[int]]) -> int:
    return len(_rref([[Fraction(x) for x in r] for r in rows])[1])


def integer_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pr = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pr is None:
                return 0
            a[k], a[pr] = a[pr], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel {x : rows @ x = 0} over Q."""
    m, pivots = _rref([[Fraction(x) for x in r] for r in rows])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


def _primitive(v: Sequence[Fraction]) -> Vec:
    """Scale a rational vector to a primitive integer vector."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in ints)


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _unimodular_inverse(m: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, pivots = _rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    inv = [[red[i][n + j] for j in range(n)] for i in range(n)]
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(
    m: Sequence[Sequence[int]],
) -> tuple[tuple[Vec, ...], tuple[Vec, ...], tuple[Vec, ...]]:
    """(U, D, V) with U @ m @ V = D diagonal, U and V unimodular, and the
    diagonal entries nonnegative with d_1 | d_2 | ... ."""
    a = [list(r) for r in m]
    k = len(a)
    n = len(a[0]) if k else 0
    u = _identity(k)
    v = _identity(n)

    def row_op(i, j, c):  # row_i += c * row_j
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, c):  # col_i += c * col_j
        for r in range(k):
            a[r][i] += c * a[r][j]
        for r in range(n):
            v[r][i] += c * v[r][j]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for r in range(k):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(n):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(k, n):
        # locate a smallest-magnitude nonzero entry in the trailing block
        best = None
        for i in range(t, k):
            for j in range(t, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        while True:
            bi, bj = best
            row_swap(t, bi)
            col_swap(t, bj)
            if a[t][t] < 0:
                row_neg(t)
            dirty = False
            for i in range(t + 1, k):
                if a[i][t] != 0:
                    row_op(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t] != 0:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    col_op(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j] != 0:
                        dirty = True
            if dirty:
                best = min(
                    ((i, j) for i in range(t, k) for j in range(t, n) if a[i][j] != 0),
                    key=lambda ij: abs(a[ij[0]][ij[1]]),
                )
                continue
            # pivot clears its row and column; enforce divisibility
            witness = next(
                (
                    (i, j)
                    for i in range(t + 1, k)
                    for j in range(t + 1, n)
                    if a[i][j] % a[t][t] != 0
                ),
                None,
            )
            if witness is None:
                break
            row_op(t, witness[0], 1)
            best = (t, t)
        t += 1

    return (
        tuple(tuple(r) for r in u),
        tuple(tuple(r) for r in a),
        tuple(tuple(r) for r in v),
    )


def snf_diagonal(d: Sequence[Sequence[int]]) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i] != 0]


# ---------------------------------------------------------------------------
# sublattices


@dataclass(frozen=True)
class Sublattice:
    """Saturated sublattice of Z^n: (Q-span of the basis) ∩ Z^n equals the
    Z-span of the basis.  `complement` extends the basis to a basis of Z^n,
    and `coord_matrix` sends x to its coordinates in the combined basis."""

    basis: tuple[Vec, ...]
    ambient: int
    complement: tuple[Vec, ...]
    coord_matrix: tuple[Vec, ...]  # n x n; x @ coord_matrix = (basis coords, quotient coords)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coords(self, x: Sequence[int]) -> tuple[Vec, Vec]:
        n = self.ambient
        full = tuple(
            sum(x[i] * self.coord_matrix[i][j] for i in range(n)) for j in range(n)
        )
        return full[: self.rank], full[self.rank :]

    def contains(self, x: Sequence[int]) -> bool:
        _, rest = self.coords(x)
        return not any(rest)

    def project(self, x: Sequence[int]) -> Vec:
        """Image of x in Z^n / (this lattice), in the complement coordinates."""
        return self.coords(x)[1]


def span_lattice_of_vectors(vectors: Sequence[Sequence[int]], ambient: int) -> Sublattice:
    """Saturated basis of Z^n ∩ span_Q(vectors), via Smith normal form."""
    rows = [tuple(v) for v in vectors if any(v)]
    if not rows:
        ident = tuple(tuple(int(i == j) for j in range(ambient)) for i in range(ambient))
        return Sublattice((), ambient, tuple(ident), ident)
    _, d, v = smith_normal_form(rows)
    r = len(snf_diagonal(d))
    vinv = _unimodular_inverse(v)
    basis = tuple(tuple(vinv[i]) for i in range(r))
    complement = tuple(tuple(vinv[i]) for i in range(r, ambient))
    return Sublattice(basis, ambient, complement, tuple(tuple(row) for row in v))


# ---------------------------------------------------------------------------
# graded posets (combinatorial face lattices)


class GradedPoset:
    """Finite graded poset with a unique maximum; the coordinate-free shadow
    of a face lattice.  Isomorphism-invariant keys drive the alpha/beta
    memo tables."""

    def __init__(self, dims: Sequence[int], less: Iterable[tuple[int, int]]):
        self.dims = tuple(dims)
        self.less = frozenset(less)  # strict order pairs (i, j): i < j
        tops = [i for i in range(len(self.dims)) if all((i, j) not in self.less for j in range(len(self.dims)) if j != i)]
        if len(tops) != 1:
            raise ValueError("graded poset must have a unique maximum")
        self.top = tops[0]

    def __len__(self):
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.dims[self.top]

    def below(self, j: int) -> list[int]:
        return [i for i in range(len(self.dims)) if (i, j) in self.less]

    def above(self, i: int) -> list[int]:
        return [j for j in range(len(self.dims)) if (i, j) in self.less]

    def proper(self) -> list[int]:
        return [i for i in range(len(self.dims)) if i != self.top]

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for (i, j) in self.less:
            if not any((i, k) in self.less and (k, j) in self.less for k in range(len(self.dims))):
                out.append((i, j))
        return out

    def interval_above(self, x: int) -> "GradedPoset":
        """Sub-poset of elements >= x, regraded so that x has dimension 0.

        For a face lattice this is the face poset of the quotient cone at x
        (the tangent cone modulo the span of x)."""
        elems = [x] + sorted(self.above(x))
        idx = {e: i for i, e in enumerate(elems)}
        dims = [self.dims[e] - self.dims[x] for e in elems]
        less = {
            (idx[a], idx[b])
            for a in elems
            for b in elems
            if a != b and ((a, b) in self.less)
        }
        return GradedPoset(dims, less)

    def remove_bottom(self) -> "GradedPoset":
        """Drop the unique minimum and lower all dimensions by one."""
        bottoms = [i for i in range(len(self.dims)) if not self.below(i)]
        if len(bottoms) != 1:
            raise ValueError("poset has no unique minimum")
        b = bottoms[0]
        elems = [e for e in range(len(self.dims)) if e != b]
        idx = {e: i for i, e in enumerate(elems)}
        dims = [self.dims[e] - 1 for e in elems]
        less = {(idx[a], idx[c]) for a in elems for c in elems if a != c and (a, c) in self.less}
        return GradedPoset(dims, less)

    def has_zero_bottom(self) -> bool:
        bottoms = [i for i in range(len(self.dims)) if not self.below(i)]
        return len(bottoms) == 1 and self.dims[bottoms[0]] == 0

    # -- isomorphism machinery for memo tables

    def hasse_digraph(self) -> "nx.DiGraph":
        g = nx.DiGraph()
        for i, d in enumerate(self.dims):
            g.add_node(i, dim=d)
        g.add_edges_from(self.covers())
        return g

    def refinement_key(self) -> tuple:
        """Isomorphism-invariant key (equal for isomorphic posets; collisions
        between non-isomorphic posets are resolved by exact matching)."""
        n = len(self.dims)
        cov = self.covers()
        up = {i: [] for i in range(n)}
        down = {i: [] for i in range(n)}
        for (i, j) in cov:
            up[i].append(j)
            down[j].append(i)
        labels = {i: self.dims[i] for i in range(n)}
        for _ in range(max(1, n)):
            sig = {
                i: (
                    labels[i],
                    tuple(sorted(labels[j] for j in up[i])),
                    tuple(sorted(labels[j] for j in down[i])),
                )
                for i in range(n)
            }
            compress = {s: k for k, s in enumerate(sorted(set(sig.values())))}
            new = {i: compress[sig[i]] for i in range(n)}
            if len(set(new.values())) == len(set(labels.values())):
                labels = new
                break
            labels = new
        return (n, tuple(sorted(self.dims)), tuple(sorted(labels.values())))

    def isomorphic(self, other: "GradedPoset") -> bool:
        if self.dims == other.dims and self.less == other.less:
            return True
        if sorted(self.dims) != sorted(other.dims):
            return False
        return nx.is_isomorphic(
            self.hasse_digraph(),
            other.hasse_digraph(),
            node_match=lambda a, b: a["dim"] == b["dim"],
        )


# ---------------------------------------------------------------------------
# faces and face lattices


@dataclass(frozen=True)
class Face:
    """A face, identified by the set of input points/generators lying on it."""

    dim: int
    members: frozenset[int]

    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))


class FaceLattice:
    """All nonempty faces, ordered by containment (equivalently membership
    inclusion); graded by dimension with the whole object as unique top."""

    def __init__(self, faces: list[Face]):
        faces = sorted(faces, key=lambda f: (f.dim, f.sorted_members()))
        self.faces = tuple(faces)
        self._by_members = {f.members: i for i, f in enumerate(faces)}
        self.top = max(range(len(faces)), key=lambda i: (faces[i].dim, len(faces[i].members)))

    def __len__(self):
        return len(self.faces)

    def __iter__(self):
        return iter(self.faces)

    def index_of(self, face: Face) -> int:
        return self._by_members[face.members]

    def face_by_members(self, members: frozenset) -> Face | None:
        i = self._by_members.get(frozenset(members))
        return self.faces[i] if i is not None else None

    def leq(self, i: int, j: int) -> bool:
        return self.faces[i].members <= self.faces[j].members

    def proper_faces(self) -> list[Face]:
        return [f for i, f in enumerate(self.faces) if i != self.top]

    def faces_of_dim(self, d: int) -> list[Face]:
        return [f for f in self.faces if f.dim == d]

    def facets_of(self, i: int) -> list[int]:
        fi = self.faces[i]
        return [
            j
            for j, fj in enumerate(self.faces)
            if fj.dim == fi.dim - 1 and fj.members < fi.members
        ]

    def poset(self) -> GradedPoset:
        less = {
            (i, j)
            for i in range(len(self.faces))
            for j in range(len(self.faces))
            if i != j and self.faces[i].members < self.faces[j].members
        }
        return GradedPoset([f.dim for f in self.faces], less)

    def to_json(self) -> dict:
        return {
            "faces": [
                {
                    "dim": f.dim,
                    "generators": sorted(f.members),
                    "parents": [
                        j
                        for j in range(len(self.faces))
                        if j != i and self.faces[i].members < self.faces[j].members
                    ],
                }
                for i, f in enumerate(self.faces)
            ]
        }


def _close_under_intersection(top: frozenset, facet_sets: list[frozenset]) -> set[frozenset]:
    seen = {top}
    frontier = [top]
    while frontier:
        cur = frontier.pop()
        for fs in facet_sets:
            nxt = cur & fs
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


# ---------------------------------------------------------------------------
# lattice polytopes


class LatticePolytope:
    """Convex hull of integer points, with exact facet inequalities and the
    full face lattice.  Lower-dimensional hulls are allowed; all internal
    geometry runs in coordinates of the saturated lattice of the affine span,
    so normalized volumes come out relative to Z^n ∩ span(P - P)."""

    def __init__(self, points: Sequence[Sequence[int]]):
        if not points:
            raise ValueError("need at least one point")
        self.points = tuple(tuple(int(c) for c in p) for p in points)
        self.ambient = len(self.points[0])
        if any(len(p) != self.ambient for p in self.points):
            raise ValueError("points must share the ambient dimension")

        uniq: list[Vec] = []
        self._uniq_index: dict[Vec, int] = {}
        owners: list[list[int]] = []
        for i, p in enumerate(self.points):
            if p not in self._uniq_index:
                self._uniq_index[p] = len(uniq)
                uniq.append(p)
                owners.append([])
            owners[self._uniq_index[p]].append(i)
        self._uniq = uniq
        self._owners = owners

        p0 = uniq[0]
        diffs = [tuple(a - b for a, b in zip(u, p0)) for u in uniq[1:]]
        self.span = span_lattice_of_vectors(diffs, self.ambient)
        self.dim = self.span.rank
        self._coords = [self._lattice_coords(u, p0) for u in uniq]
        self._base_point = p0

        self._build_faces()
        self._vertex_uniq = sorted(
            {u for f in self.lattice.faces if f.dim == 0 for u in self._uface_members(f)}
        )
        self.vertices = tuple(self._uniq[u] for u in self._vertex_uniq)

    # -- helpers

    def _lattice_coords(self, u: Vec, p0: Vec) -> Vec:
        d = tuple(a - b for a, b in zip(u, p0))
        coords, rest = self.span.coords(d)
        if any(rest):
            raise AssertionError("point outside its own affine span")
        return coords

    def _uface_members(self, face: Face) -> set[int]:
        return {self._uniq_index[self.points[i]] for i in face.members}

    def _build_faces(self):
        d = self.dim
        nu = len(self._uniq)
        all_members = frozenset(range(len(self.points)))
        if d == 0:
            self.inequalities = ()
            self._facet_data = []
            self.lattice = FaceLattice([Face(0, all_members)])
            return

        coords = self._coords
        facet_keys: dict[tuple[Vec, int], frozenset[int]] = {}
        for subset in itertools.combinations(range(nu), d):
            base = coords[subset[0]]
            rows = [
                [coords[s][j] - base[j] for j in range(d)] for s in subset[1:]
            ]
            if d > 1 and matrix_rank(rows) != d - 1:
                continue
            if d == 1:
                normal = (1,)
            else:
                kern = _nullspace(rows, d)
                if len(kern) != 1:
                    continue
                normal = _primitive(kern[0])
            b = sum(n * c for n, c in zip(normal, base))
            vals = [sum(n * c for n, c in zip(normal, pt)) for pt in coords]
            if all(v <= b for v in vals):
                pass
            elif all(v >= b for v in vals):
                normal = tuple(-x for x in normal)
                b = -b
                vals = [-v for v in vals]
            else:
                continue
            members = frozenset(
                i for u, v in enumerate(vals) if v == b for i in self._owners[u]
            )
            facet_keys[(normal, b)] = members

        facet_sets = list(facet_keys.values())
        face_sets = _close_under_intersection(all_members, facet_sets)
        faces = []
        for ms in face_sets:
            if not ms:
                continue
            upts = sorted({self._uniq_index[self.points[i]] for i in ms})
            base = coords[upts[0]]
            rows = [[coords[u][j] - base[j] for j in range(d)] for u in upts[1:]]
            fdim = matrix_rank(rows) if rows else 0
            faces.append(Face(fdim, frozenset(ms)))
        self.lattice = FaceLattice(faces)
        self._facet_data = sorted(facet_keys.items())
        self.inequalities = tuple(
            (normal, b) for (normal, b), _ in self._facet_data
        )

    # -- public queries

    def face_points(self, face: Face) -> tuple[Vec, ...]:
        return tuple(sorted({self.points[i] for i in face.members}))

    def face_vertices(self, face: Face) -> tuple[Vec, ...]:
        mem = self._uface_members(face)
        return tuple(self._uniq[u] for u in self._vertex_uniq if u in mem)

    def contains_point_index(self, face: Face, i: int) -> bool:
        return i in face.members

    def normalized_volume(self) -> int:
        """d! * vol relative to the lattice Z^n ∩ span(P - P); 1 in dim 0."""
        if self.dim == 0:
            return 1
        total = 0
        for simplex in self._triangulate(self.lattice.top):
            v0 = simplex[0]
            rows = [
                [self._coords[u][j] - self._coords[v0][j] for j in range(self.dim)]
                for u in simplex[1:]
            ]
            total += abs(integer_det(rows))
        return total

    def _triangulate(self, face_index: int, memo=None) -> list[tuple[int, ...]]:
        """Pulling triangulation; simplices as tuples of unique-point indices."""
        if memo is None:
            memo = {}
        if face_index in memo:
            return memo[face_index]
        face = self.lattice.faces[face_index]
        if face.dim == 0:
            out = [(min(self._uface_members(face)),)]
        else:
            mem = self._uface_members(face)
            v0 = min(u for u in self._vertex_uniq if u in mem)
            out = []
            for child in self.lattice.facets_of(face_index):
                if v0 in self._uface_members(self.lattice.faces[child]):
                    continue
                for s in self._triangulate(child, memo):
                    out.append((v0,) + s)
        memo[face_index] = out
        return out

    def __repr__(self):
        return (
            f"LatticePolytope(dim={self.dim}, ambient={self.ambient}, "
            f"vertices={len(self.vertices)}, faces={len(self.lattice)})"
        )


def hull(points: Sequence[Sequence[int]]) -> LatticePolytope:
    """Convex hull with exact vertices, facet inequalities, and face lattice."""
    return LatticePolytope(points)


def normalized_volume(P: LatticePolytope) -> int:
    return P.normalized_volume()


# ---------------------------------------------------------------------------
# rational cones


class RationalCone:
    """Full-dimensional convex polyhedral cone generated by integer vectors.

    Faces are defined strictly via supporting hyperplanes, so cones that
    contain lines have few or no proper faces; {0} is a face iff the cone
    is pointed."""

    def __init__(self, generators: Sequence[Sequence[int]], ambient: int | None = None):
        gens = tuple(tuple(int(c) for c in g) for g in generators)
        if not gens:
            raise ValueError("need at least one generator")
        n = ambient if ambient is not None else len(gens[0])
        if any(len(g) != n for g in gens):
            raise ValueError("generators must share the ambient dimension")
        if matrix_rank(gens) != n:
            raise ValueError("cone must be full-dimensional in its ambient space")
        self.generators = gens
        self.ambient = n
        self._build()

    def _build(self):
        n = self.ambient
        gens = self.generators
        uniq = sorted({g for g in gens if any(g)})
        normals: dict[Vec, frozenset[int]] = {}

        def consider(candidate: Sequence[Fraction]):
            try:
                r = _primitive(candidate)
            except ValueError:
                return
            vals = [sum(a * b for a, b in zip(r, g)) for g in gens]
            if all(v >= 0 for v in vals):
                pass
            elif all(v <= 0 for v in vals):
                r = tuple(-x for x in r)
                vals = [-v for v in vals]
            else:
                return
            if all(v == 0 for v in vals):
                return
            members = frozenset(j for j, v in enumerate(vals) if v == 0)
            normals[r] = members

        if n == 1:
            consider([Fraction(1)])
            consider([Fraction(-1)])
        else:
            for subset in itertools.combinations(uniq, n - 1):
                if matrix_rank(subset) != n - 1:
                    continue
                kern = _nullspace(subset, n)
                if len(kern) == 1:
                    consider(kern[0])

        self.facet_normals = tuple(sorted(normals))
        all_members = frozenset(range(len(gens)))
        face_sets = _close_under_intersection(all_members, list(normals.values()))
        faces = []
        for ms in face_sets:
            vecs = [gens[j] for j in ms if any(gens[j])]
            fdim = matrix_rank(vecs) if vecs else 0
            faces.append(Face(fdim, frozenset(ms)))
        self.lattice = FaceLattice(faces)

    # -- queries

    @property
    def dim(self) -> int:
        return self.ambient

    def is_pointed(self) -> bool:
        return any(f.dim == 0 for f in self.lattice.faces)

    def zero_face(self) -> Face:
        for f in self.lattice.faces:
            if f.dim == 0:
                return f
        raise ValueError("cone is not pointed: {0} is not a face")

    def face_vectors(self, face: Face) -> tuple[Vec, ...]:
        return tuple(self.generators[j] for j in sorted(face.members))

    def proper_faces(self) -> list[Face]:
        return self.lattice.proper_faces()

    def faces_of_codim(self, c: int) -> list[Face]:
        return self.lattice.faces_of_dim(self.ambient - c)

    def member_count(self, face: Face) -> int:
        """Number of generator columns lying in the face."""
        return len(face.members)

    def contains_generator(self, face: Face, j: int) -> bool:
        return j in face.members

    def poset(self) -> GradedPoset:
        return self.lattice.poset()

    def dual_generators(self) -> tuple[Vec, ...]:
        """Generators of the dual cone (the facet normals; valid because the
        cone is full-dimensional)."""
        return self.facet_normals

    def __repr__(self):
        return (
            f"RationalCone(ambient={self.ambient}, generators={len(self.generators)}, "
            f"faces={len(self.lattice)}, pointed={self.is_pointed()})"
        )


def cone_from_generators(generators: Sequence[Sequence[int]], ambient: int | None = None) -> RationalCone:
    return RationalCone(generators, ambient)


# ---------------------------------------------------------------------------
# exponent matrices


@dataclass(frozen=True)
class ExponentMatrix:
    """n x N integer matrix of full row rank; columns are the monomial
    exponent vectors w_1..w_N."""

    rows: tuple[Vec, ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ValueError("matrix must be nonempty")
        object.__setattr__(self, "rows", tuple(tuple(int(c) for c in r) for r in self.rows))
        if len({len(r) for r in self.rows}) != 1:
            raise ValueError("ragged rows")
        if matrix_rank(self.rows) != len(self.rows):
            raise ValueError("matrix must have full row rank n")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def N(self) -> int:
        return len(self.rows[0])

    @property
    def columns(self) -> tuple[Vec, ...]:
        return tuple(tuple(r[j] for r in self.rows) for j in range(self.N))

    def polytope(self) -> LatticePolytope:
        """Delta: convex hull of {0, w_1, ..., w_N}; point index j+1 <-> w_j."""
        origin = tuple([0] * self.n)
        return hull([origin, *self.columns])

    def cone(self) -> RationalCone:
        """delta: the cone generated by the columns."""
        return RationalCone(self.columns, self.n)

    def columns_generate_lattice(self) -> bool:
        _, d, _ = smith_normal_form(self.rows)
        divisors = snf_diagonal(d)
        return len(divisors) == self.n and all(x == 1 for x in divisors)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def positive_hull(A: ExponentMatrix) -> RationalCone:
    """The cone delta generated by the columns of A (full face lattice)."""
    return A.cone()


# ---------------------------------------------------------------------------
# face-derived constructions


def span_lattice(cone: RationalCone, face: Face) -> Sublattice:
    """Saturated basis of Z^n ∩ span(face) for a face of a cone."""
    return span_lattice_of_vectors(
        [cone.generators[j] for j in sorted(face.members)], cone.ambient
    )


def cone_of_face(obj, face: Face) -> RationalCone:
    """cone_P(F), the cone generated by u' - u for u' in P and u in F."""
    if isinstance(obj, LatticePolytope):
        if face.members not in obj.lattice._by_members:
            raise ValueError("not a face of this polytope")
        fverts = obj.face_vertices(face)
        u0 = min(fverts)
        gens = [tuple(a - b for a, b in zip(v, u0)) for v in obj.vertices]
        gens += [tuple(b - a for a, b in zip(v, u0)) for v in fverts]
        gens = [g for g in gens if any(g)]
        if not gens:
            raise ValueError("cone of the full 0-dimensional polytope is trivial")
        return RationalCone(gens, obj.ambient)
    if isinstance(obj, RationalCone):
        if face.members not in obj.lattice._by_members:
            raise ValueError("not a face of this cone")
        gens = list(obj.generators) + [
            tuple(-c for c in obj.generators[j]) for j in sorted(face.members)
        ]
        gens = [g for g in gens if any(g)]
        return RationalCone(gens, obj.ambient)
    raise TypeError(f"unsupported object {type(obj).__name__}")


def quotient_cone(cone: RationalCone, face: Face) -> RationalCone:
    """Image of the cone in Z^n / span(face), in coordinates of a basis of
    the saturated quotient lattice; pointed with {0} a face when `face` is a
    proper face obtained from a supporting hyperplane."""
    sub = span_lattice(cone, face)
    if sub.rank == 0:
        return cone
    if sub.rank == cone.ambient:
        raise ValueError("cannot form the quotient by a full-dimensional face")
    gens = [sub.project(g) for g in cone.generators]
    gens = [g for g in gens if any(g)]
    return RationalCone(gens, cone.ambient - sub.rank)


def poly_of_cone(cone_or_poset) -> GradedPoset:
    """Face poset of poly(C) for a pointed cone C: the faces of C except
    {0}, each with dimension lowered by one.  Only the combinatorial type is
    produced, which is all the alpha/beta recursion needs."""
    if isinstance(cone_or_poset, RationalCone):
        if not cone_or_poset.is_pointed():
            raise ValueError("cone is not pointed: poly(C) is undefined")
        poset = cone_or_poset.poset()
    elif isinstance(cone_or_poset, GradedPoset):
        poset = cone_or_poset
        if not poset.has_zero_bottom():
            raise ValueError("cone poset is not pointed: poly(C) is undefined")
    else:
        raise TypeError(f"unsupported object {type(cone_or_poset).__name__}")
    return poset.remove_bottom()


# ---------------------------------------------------------------------------
# nonconfluence utilities


def nonconfluence_vector(A: ExponentMatrix) -> Vec | None:
    """Some integer c with c . w_j = 1 for every column, or None if no such
    vector exists.  Any solution is automatically primitive."""
    at = [list(col) for col in A.columns]  # N x n
    u, d, v = smith_normal_form(at)
    r = len(snf_diagonal(d))
    n, N = A.n, A.N
    ub = [sum(u[i][j] for j in range(N)) for i in range(N)]  # U @ (1,...,1)
    y = [0] * n
    for i in range(r):
        if ub[i] % d[i][i] != 0:
            return None
        y[i] = ub[i] // d[i][i]
    for i in range(r, N):
        if ub[i] != 0:
            return None
    c = tuple(sum(v[i][j] * y[j] for j in range(n)) for i in range(n))
    assert all(sum(ci * wi for ci, wi in zip(c, col)) == 1 for col in A.columns)
    return c


def extend_to_unimodular(c: Sequence[int]) -> tuple[Vec, ...]:
    """An n x n integer matrix with determinant ±1 whose first row is c."""
    c = tuple(int(x) for x in c)
    g = 0
    for x in c:
        g = gcd(g, x)
    if g != 1:
        raise ValueError(f"vector is not primitive: gcd = {g}")
    _, d, v = smith_normal_form([list(c)])
    # c @ V = (±1, 0, ..., 0); fix the sign so that it is exactly e_1
    cv = [sum(c[i] * v[i][j] for i in range(len(c))) for j in range(len(c))]
    vv = [list(row) for row in v]
    if cv[0] == -1:
        for row in vv:
            row[0] = -row[0]
    matrix = tuple(tuple(r) for r in _unimodular_inverse(vv))
    assert matrix[0] == c
    return matrix
