"""Exact rational polyhedral engine.

Cones carry both descriptions (extremal rays and facet normals), computed by
the double description method over arbitrary-precision integers.  Insertion
order is lexicographic and every stored vector is canonical, so equal cones
produced along different routes compare equal and golden-file tests are
byte-stable.  Fans are ray lists plus maximal cones with the face axioms
checked exactly, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactlat import (
    dot,
    hnf_basis,
    integer_kernel,
    orthogonal_complement_projection,
    primitive_vector,
    rational_rank,
    scale_to_primitive_integer,
)

Vec = tuple[int, ...]


# ---------------------------------------------------------------------------
# double description core


def _dd_inequalities(dim: int, ineqs: list[Vec]) -> tuple[list[Vec], list[Vec]]:
    """Rays and lineality basis of {x in R^dim : a.x >= 0 for a in ineqs}.

    Incremental double description with the combinatorial adjacency test,
    all arithmetic over Z.  `ineqs` must already be in the fixed processing
    order; rays are returned un-normalized (use _canonical_rays).
    """
    lineality: list[Vec] = [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
    rays: list[list] = []  # entries [vector, zeroset bitmask over processed ineqs]

    for idx, a in enumerate(ineqs):
        bit = 1 << idx
        vals_lin = [dot(a, l) for l in lineality]
        if any(vals_lin):
            j0 = next(j for j, v in enumerate(vals_lin) if v)
            l0 = lineality[j0]
            v0 = vals_lin[j0]
            if v0 < 0:
                l0 = tuple(-x for x in l0)
                v0 = -v0
            new_lin = []
            for j, l in enumerate(lineality):
                if j == j0:
                    continue
                w = vals_lin[j]
                if w:
                    l = primitive_vector(tuple(v0 * x - w * y for x, y in zip(l, l0)))
                new_lin.append(l)
            for entry in rays:
                w = dot(a, entry[0])
                if w:
                    entry[0] = primitive_vector(
                        tuple(v0 * x - w * y for x, y in zip(entry[0], l0))
                    )
                entry[1] |= bit  # every projected ray is tight for a
            # l0 becomes a ray; it is tight for every previously processed
            # inequality because it lived in the lineality space so far.
            rays.append([l0, bit - 1])
            lineality = new_lin
            continue

        pos = []
        zero = []
        neg = []
        for entry in rays:
            v = dot(a, entry[0])
            if v > 0:
                pos.append((entry, v))
            elif v < 0:
                neg.append((entry, v))
            else:
                zero.append(entry)
        if not neg:
            for entry in zero:
                entry[1] |= bit
            continue
        if not pos:
            # The inequality is an implicit equation on the current cone.
            for entry in zero:
                entry[1] |= bit
            rays = zero
            continue

        d_quot = dim - len(lineality)
        survivors = [entry for entry, _ in pos] + zero
        for entry in zero:
            entry[1] |= bit
        all_entries = rays
        new_rays = []
        for entry_p, vp in pos:
            zp = entry_p[1]
            for entry_n, vn in neg:
                zmeet = zp & entry_n[1]
                if d_quot > 2 and zmeet.bit_count() < d_quot - 2:
                    continue  # adjacency needs at least d-2 common tight ineqs
                adjacent = True
                for other in all_entries:
                    if other is entry_p or other is entry_n:
                        continue
                    if other[1] & zmeet == zmeet:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                comb = tuple(
                    vp * x - vn * y for x, y in zip(entry_n[0], entry_p[0])
                )
                new_rays.append([primitive_vector(comb), (zmeet | bit)])
        rays = survivors + new_rays

    return [tuple(entry[0]) for entry in rays], lineality


def _canonical_rays(rays, lineality) -> tuple[Vec, ...]:
    """Canonical ray representatives: primitive orthogonal-to-lineality parts."""
    lin = [tuple(l) for l in lineality]
    out = set()
    for r in rays:
        if lin:
            r = scale_to_primitive_integer(orthogonal_complement_projection(r, lin))
        else:
            r = primitive_vector(r)
        if any(r):
            out.add(tuple(r))
    return tuple(sorted(out))


def _canonical_lineality(lineality) -> tuple[Vec, ...]:
    return tuple(hnf_basis(lineality)) if lineality else ()


def _prepare_inequalities(ineqs) -> list[Vec]:
    seen = set()
    for a in ineqs:
        a = primitive_vector(a)
        if any(a):
            seen.add(tuple(a))
    return sorted(seen)


def _solve_hrep(dim: int, ineqs, eqs) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
    """Canonical (rays, lineality) of an H-representation."""
    eqs = [tuple(e) for e in eqs if any(e)]
    ineqs = _prepare_inequalities(ineqs)
    if eqs:
        kernel = integer_kernel(eqs)
        if not kernel:
            return (), ()
        # Work in saturated kernel coordinates, then map back.
        sub = _prepare_inequalities([tuple(dot(a, k) for k in kernel) for a in ineqs])
        rays_s, lin_s = _dd_inequalities(len(kernel), sub)
        lift = lambda w: tuple(
            sum(w[i] * kernel[i][j] for i in range(len(kernel))) for j in range(dim)
        )
        rays = [lift(r) for r in rays_s]
        lineality = [lift(l) for l in lin_s]
    else:
        rays, lineality = _dd_inequalities(dim, ineqs)
    return _canonical_rays(rays, lineality), _canonical_lineality(lineality)


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone with dual (ray + facet) description.

    rays:      extremal ray generators, primitive, orthogonal to the
               lineality space, lex-sorted
    lineality: canonical (HNF) lattice basis of the lineality space
    facets:    irredundant inward facet normals, canonical like rays
    equations: canonical lattice basis of the annihilator of the span
    """

    ambient_dim: int
    rays: tuple[Vec, ...]
    lineality: tuple[Vec, ...]
    facets: tuple[Vec, ...]
    equations: tuple[Vec, ...]

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rays(ambient_dim: int, generators) -> "Cone":
        generators = [tuple(int(x) for x in g) for g in generators]
        if ambient_dim == 0 and generators:
            raise ValueError("ambient dimension 0 admits no generators")
        for g in generators:
            if len(g) != ambient_dim:
                raise ValueError("generator has wrong length")
        # Polar cone: its rays are our facet normals, its lineality our
        # span equations.  A second pass recovers canonical extremal rays,
        # which also strips non-extremal input generators.
        facets, equations = _solve_hrep(ambient_dim, generators, ())
        rays, lineality = _solve_hrep(ambient_dim, facets, equations)
        return Cone(ambient_dim, rays, lineality, facets, equations)

    @staticmethod
    def from_inequalities(ambient_dim: int, inequalities, equations=()) -> "Cone":
        inequalities = [tuple(int(x) for x in a) for a in inequalities]
        equations = [tuple(int(x) for x in e) for e in equations]
        for a in list(inequalities) + list(equations):
            if len(a) != ambient_dim:
                raise ValueError("inequality has wrong length")
        rays, lineality = _solve_hrep(ambient_dim, inequalities, equations)
        facets, span_eqs = _solve_hrep(
            ambient_dim, rays, lineality
        )  # polar of the V-representation
        return Cone(ambient_dim, rays, lineality, facets, span_eqs)

    @staticmethod
    def full_space(ambient_dim: int) -> "Cone":
        return Cone.from_inequalities(ambient_dim, ())

    # -- basic queries -------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    @property
    def lineality_dim(self) -> int:
        return len(self.lineality)

    def is_pointed(self) -> bool:
        return not self.lineality

    def is_trivial(self) -> bool:
        return not self.rays and not self.lineality

    def contains(self, point) -> bool:
        """Exact membership for an integer or rational point."""
        point = tuple(Fraction(x) for x in point)
        if len(point) != self.ambient_dim:
            raise ValueError("point has wrong length")
        return all(dot(e, point) == 0 for e in self.equations) and all(
            dot(n, point) >= 0 for n in self.facets
        )

    def contains_cone(self, other: "Cone") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        for r in other.rays:
            if not self.contains(r):
                return False
        for l in other.lineality:
            if not (self.contains(l) and self.contains(tuple(-x for x in l))):
                return False
        return True

    def interior_point(self) -> Vec:
        """A point in the relative interior: the sum of the extremal rays.

        Valid for pointed cones and pure lineality spaces (where zero is
        interior); mixed cones would need a lineality offset and are
        rejected.
        """
        if self.rays and self.lineality:
            raise ValueError("interior point of a mixed non-pointed cone")
        acc = [0] * self.ambient_dim
        for r in self.rays:
            acc = [a + b for a, b in zip(acc, r)]
        return tuple(acc)

    def key(self):
        return (self.ambient_dim, self.rays, self.lineality)

    def __eq__(self, other):
        return isinstance(other, Cone) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


# ---------------------------------------------------------------------------
# cone operations


def cone_from_generators(ambient_dim: int, generators) -> Cone:
    """Cone with irredundant extremal rays and irredundant facets."""
    return Cone.from_rays(ambient_dim, generators)


def dual_cone(c: Cone) -> Cone:
    """Swap the ray and facet descriptions; an exact involution."""
    return Cone(c.ambient_dim, c.facets, c.equations, c.rays, c.lineality)


def intersect_cones(a: Cone, b: Cone) -> Cone:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return Cone.from_inequalities(
        a.ambient_dim, a.facets + b.facets, a.equations + b.equations
    )


def is_face(f: Cone, c: Cone) -> bool:
    """Exact test that f equals c cut by some supporting hyperplane.

    The cone itself and (for pointed cones) the zero cone count as faces.
    Raises if f is not even a subset of c.
    """
    if not c.contains_cone(f):
        raise ValueError("first cone is not contained in the second")
    tight = [n for n in c.facets if all(dot(n, r) == 0 for r in f.rays)]
    generated_rays = tuple(
        sorted(r for r in c.rays if all(dot(n, r) == 0 for n in tight))
    )
    return generated_rays == f.rays and f.lineality == c.lineality


def minimal_face_containing(c: Cone, point) -> tuple[Vec, ...]:
    """Rays of the smallest face of c containing the given point of c."""
    assert c.contains(point)
    tight = [n for n in c.facets if dot(n, point) == 0]
    return tuple(sorted(r for r in c.rays if all(dot(n, r) == 0 for n in tight)))


# ---------------------------------------------------------------------------
# face lattice enumeration


def _rank_of_rows(rows) -> int:
    if not rows:
        return 0
    return rational_rank([list(r) for r in rows])


def face_lattice_raysets(c: Cone) -> dict[int, int]:
    """All faces of a pointed cone as {ray bitmask: dimension}.

    Faces are the Galois-closed sets of the ray-facet incidence; enumeration
    adds one ray at a time and closes, which reaches every face.  Dimensions
    are exact ranks of the ray sets.
    """
    if not c.is_pointed():
        raise ValueError("face enumeration requires a pointed cone")
    rays = c.rays
    facets = c.facets
    nrays = len(rays)
    ray_facet_mask = []
    for r in rays:
        mask = 0
        for h_idx, n in enumerate(facets):
            if dot(n, r) == 0:
                mask |= 1 << h_idx
        ray_facet_mask.append(mask)
    all_facets_mask = (1 << len(facets)) - 1

    def close(ray_mask: int) -> int:
        tight = all_facets_mask
        m = ray_mask
        while m:
            low = m & -m
            tight &= ray_facet_mask[low.bit_length() - 1]
            m ^= low
        closed = 0
        for i in range(nrays):
            if ray_facet_mask[i] & tight == tight:
                closed |= 1 << i
        return closed

    bottom = close(0)
    if bottom != 0:
        raise ValueError("cone is not pointed in incidence data")
    faces: dict[int, int] = {0: 0}
    stack = [0]
    while stack:
        cur = stack.pop()
        for i in range(nrays):
            b = 1 << i
            if cur & b:
                continue
            child = close(cur | b)
            if child not in faces:
                faces[child] = -1
                stack.append(child)
    # exact dimensions
    single_cache: dict[int, int] = {}
    for mask in faces:
        n = mask.bit_count()
        if n == 0:
            faces[mask] = 0
        elif n <= 2:
            faces[mask] = n  # distinct extremal rays are independent in pairs
        else:
            rows = [rays[i] for i in range(nrays) if mask & (1 << i)]
            faces[mask] = _rank_of_rows(rows)
    return faces


def face_lattice_fvector(c: Cone) -> tuple[int, ...]:
    """Face counts by dimension 1..dim-1 (rays through facets)."""
    faces = face_lattice_raysets(c)
    top_dim = c.dim
    counts = [0] * (top_dim + 1)
    for _, d in faces.items():
        counts[d] += 1
    assert counts[top_dim] == 1  # the cone itself
    return tuple(counts[1:top_dim])


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class Polytope:
    """Bounded rational polytope, stored through its homogenization cone."""

    ambient_dim: int
    vertices: tuple[tuple[Fraction, ...], ...]
    facets: tuple[Vec, ...]  # (b, a1..an): b + a.x >= 0
    equations: tuple[Vec, ...]  # (b, a1..an): b + a.x == 0
    _cone: Cone

    @property
    def dim(self) -> int:
        return self._cone.dim - 1 if self.vertices else -1

    def f_vector(self) -> tuple[int, ...]:
        """(f_0, ..., f_{dim-1}); empty for a point."""
        if not self.vertices:
            return ()
        return face_lattice_fvector(self._cone)

    def is_lattice_polytope(self) -> bool:
        return all(x.denominator == 1 for v in self.vertices for x in v)

    def contains(self, point) -> bool:
        point = (Fraction(1),) + tuple(Fraction(x) for x in point)
        return self._cone.contains(point)


def _polytope_from_cone(ambient_dim: int, cone: Cone) -> Polytope:
    vertices = []
    for r in cone.rays:
        if r[0] <= 0:
            raise ValueError("unbounded polyhedron is not supported")
        vertices.append(tuple(Fraction(x, r[0]) for x in r[1:]))
    if cone.lineality:
        raise ValueError("unbounded polyhedron is not supported")
    return Polytope(
        ambient_dim,
        tuple(sorted(vertices)),
        cone.facets,
        cone.equations,
        cone,
    )


def convex_hull(points) -> Polytope:
    """Convex hull of rational points; works inside the affine span."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    if not pts:
        raise ValueError("hull of no points")
    ambient = len(pts[0])
    gens = [scale_to_primitive_integer((Fraction(1),) + p) for p in pts]
    cone = Cone.from_rays(ambient + 1, gens)
    return _polytope_from_cone(ambient, cone)


def polytope_from_inequalities(ambient_dim: int, rows) -> Polytope | None:
    """{x : b + a.x >= 0 for (b, *a) in rows}; None when empty."""
    ineqs = [tuple(int(x) for x in row) for row in rows]
    homog = ineqs + [tuple([1] + [0] * ambient_dim)]
    cone = Cone.from_inequalities(ambient_dim + 1, homog)
    if cone.is_trivial():
        return None
    return _polytope_from_cone(ambient_dim, cone)


# ---------------------------------------------------------------------------
# exact linear programming (membership oracle, kept independent of the DD)


def lp_in_cone(generators, point) -> bool:
    """Phase-1 rational simplex: is point a nonnegative combination?

    Bland's rule gives termination.  This is deliberately a second route,
    independent of facet computations, for Farkas-style cross checks.
    """
    gens = [tuple(Fraction(x) for x in g) for g in generators]
    b = [Fraction(x) for x in point]
    m = len(b)
    if not gens:
        return all(x == 0 for x in b)
    n = len(gens)
    # rows: m constraints sum_j lambda_j gens[j][i] = b_i, artificials added
    tableau = [[gens[j][i] for j in range(n)] for i in range(m)]
    rhs = list(b)
    for i in range(m):
        if rhs[i] < 0:
            tableau[i] = [-x for x in tableau[i]]
            rhs[i] = -rhs[i]
    for i in range(m):
        row = [Fraction(0)] * m
        row[i] = Fraction(1)
        tableau[i] = tableau[i] + row
    basis = [n + i for i in range(m)]
    cost = [Fraction(0)] * n + [Fraction(1)] * m

    def reduced_costs():
        # duals y solve y_i over basic rows; here basis columns are unit-ized
        rc = list(cost)
        for i, bi in enumerate(basis):
            if cost[bi] != 0:
                for j in range(n + m):
                    rc[j] -= cost[bi] * tableau[i][j]
        return rc

    # normalize tableau so basic columns are unit vectors (they start so)
    while True:
        rc = reduced_costs()
        enter = next((j for j in range(n + m) if rc[j] < 0), None)
        if enter is None:
            break
        ratios = [
            (rhs[i] / tableau[i][enter], basis[i], i)
            for i in range(m)
            if tableau[i][enter] > 0
        ]
        if not ratios:
            return False  # unbounded phase-1 cannot happen; defensive
        best = min(ratios, key=lambda t: (t[0], t[1]))
        leave_row = best[2]
        piv = tableau[leave_row][enter]
        tableau[leave_row] = [x / piv for x in tableau[leave_row]]
        rhs[leave_row] /= piv
        for i in range(m):
            if i != leave_row and tableau[i][enter] != 0:
                f = tableau[i][enter]
                tableau[i] = [x - f * y for x, y in zip(tableau[i], tableau[leave_row])]
                rhs[i] -= f * rhs[leave_row]
        basis[leave_row] = enter
    objective = sum(rhs[i] for i in range(m) if basis[i] >= n)
    return objective == 0


# ---------------------------------------------------------------------------
# fans


@dataclass(frozen=True)
class Fan:
    """Fan given by a global primitive ray list and maximal cones.

    maximal_cones are frozensets of ray indices.  Use check_fan to verify
    the axioms exactly; nothing here assumes them.
    """

    ambient_dim: int
    rays: tuple[Vec, ...]
    maximal_cones: tuple[frozenset[int], ...]

    def cone_of(self, indices) -> Cone:
        return Cone.from_rays(self.ambient_dim, [self.rays[i] for i in indices])

    def cones(self) -> list[Cone]:
        return [self.cone_of(s) for s in self.maximal_cones]


def make_fan(ambient_dim: int, rays, maximal_cones) -> Fan:
    rays = tuple(tuple(int(x) for x in r) for r in rays)
    for r in rays:
        if primitive_vector(r) != r or not any(r):
            raise ValueError("fan rays must be primitive and nonzero")
    if len(set(rays)) != len(rays):
        raise ValueError("duplicate fan ray")
    maximal = []
    for s in maximal_cones:
        s = frozenset(int(i) for i in s)
        if any(i < 0 or i >= len(rays) for i in s):
            raise ValueError("cone index out of range")
        maximal.append(s)
    maximal = tuple(sorted(set(maximal), key=sorted))
    return Fan(ambient_dim, rays, maximal)


def check_fan(fan: Fan) -> None:
    """Exact fan axioms: listed cones meet in common faces, none redundant."""
    cones = fan.cones()
    for i, ci in enumerate(cones):
        expected = tuple(sorted(fan.rays[k] for k in fan.maximal_cones[i]))
        if ci.rays != expected:
            raise ValueError(f"cone {sorted(fan.maximal_cones[i])} has non-extremal generators")
    for i in range(len(cones)):
        for j in range(i + 1, len(cones)):
            if fan.maximal_cones[i] <= fan.maximal_cones[j] or fan.maximal_cones[
                j
            ] <= fan.maximal_cones[i]:
                raise ValueError("maximal cone contained in another")
            meet = intersect_cones(cones[i], cones[j])
            if not (is_face(meet, cones[i]) and is_face(meet, cones[j])):
                raise ValueError(
                    f"cones {sorted(fan.maximal_cones[i])} and "
                    f"{sorted(fan.maximal_cones[j])} do not meet in a common face"
                )


def fan_face_index_sets(fan: Fan) -> set[frozenset[int]]:
    """All faces of all maximal cones, as global ray index sets."""
    out: set[frozenset[int]] = set()
    for s in fan.maximal_cones:
        idx = sorted(s)
        cone = fan.cone_of(idx)
        if not cone.is_pointed():
            raise ValueError("fan cones must be pointed")
        for mask in face_lattice_raysets(cone):
            out.add(frozenset(idx[i] for i in range(len(idx)) if mask & (1 << i)))
    return out


def is_complete_fan(fan: Fan) -> bool:
    """Completeness via the wall condition.

    A pure full-dimensional fan covers R^n exactly when every codimension-one
    face of a maximal cone is shared by exactly two maximal cones.
    """
    cones = fan.cones()
    if not cones or any(c.dim != fan.ambient_dim for c in cones):
        return False
    wall_count: dict[tuple, int] = {}
    for ci in cones:
        for n in ci.facets:
            wall_rays = tuple(sorted(r for r in ci.rays if dot(n, r) == 0))
            wall_count[wall_rays] = wall_count.get(wall_rays, 0) + 1
    return all(v == 2 for v in wall_count.values())


def fan_is_smooth(fan: Fan) -> bool:
    """Every maximal cone unimodular (simplicial with determinant +-1)."""
    from .exactlat import det

    for s in fan.maximal_cones:
        rays = [fan.rays[i] for i in sorted(s)]
        if len(rays) != fan.ambient_dim:
            return False
        if abs(det([list(r) for r in rays])) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# fan text format (External Interface)


def fan_to_text(fan: Fan) -> str:
    lines = ["RAYS"]
    for r in fan.rays:
        lines.append(" ".join(str(x) for x in r))
    lines.append("CONES")
    for s in fan.maximal_cones:
        lines.append(" ".join(str(i) for i in sorted(s)))
    return "\n".join(lines) + "\n"


def fan_from_text(text: str, ambient_dim: int | None = None) -> Fan:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "RAYS":
        raise ValueError("fan text must start with a RAYS block")
    try:
        split = lines.index("CONES")
    except ValueError:
        raise ValueError("fan text must contain a CONES block") from None
    rays = [tuple(int(x) for x in ln.split()) for ln in lines[1:split]]
    cones = [frozenset(int(x) for x in ln.split()) for ln in lines[split + 1 :]]
    if ambient_dim is None:
        if not rays:
            raise ValueError("cannot infer ambient dimension")
        ambient_dim = len(rays[0])
    return make_fan(ambient_dim, rays, cones)
