"""Equivariant abstract simplicial complexes.

A GComplex carries a finite group action on its vertices such that simplices
map to simplices; the regularity condition is that any simplex fixed setwise
by a group element is fixed vertexwise.  Points of the realisation are formal
convex combinations with exact rational weights, measured in the l^1 metric.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Optional, Sequence

from .groups import (
    FiniteGroup,
    GroupError,
    Perm,
    Subgroup,
    is_perm,
    perm_mul,
)
from .intlinalg import gfp_rank, smith_normal_form


def trivial_group() -> FiniteGroup:
    return FiniteGroup(1, [])


def _close_faces(simplices: Iterable[frozenset]):
    out = set()
    stack = [frozenset(s) for s in simplices]
    for s in stack:
        if not s:
            raise GroupError("simplices must be nonempty")
        for k in range(1, len(s) + 1):
            for face in combinations(sorted(s), k):
                out.add(frozenset(face))
    return frozenset(out)


class GComplex:
    """Finite simplicial complex with a simplicial group action."""

    def __init__(self, group: FiniteGroup, nverts: int,
                 simplices: Iterable, gen_vertex_perms: Sequence[Perm],
                 close_faces: bool = False):
        self.group = group
        self.nverts = nverts
        sims = {frozenset(s) for s in simplices}
        if close_faces:
            sims = set(_close_faces(sims)) if sims else set()
        self.simplices = frozenset(sims)
        perms = tuple(tuple(p) for p in gen_vertex_perms)
        if len(perms) != len(group.generators):
            raise GroupError("one vertex permutation per group generator")
        for p in perms:
            if not is_perm(p, nverts):
                raise GroupError("vertex action is not a permutation")
        self.gen_vertex_perms = perms
        for s in self.simplices:
            if not all(0 <= v < nverts for v in s):
                raise GroupError("simplex vertex out of range")
        self._element_perm: Optional[Dict] = None

    # -- basic invariants ----------------------------------------------------

    @property
    def dim(self) -> int:
        """Dimension; -1 for the empty complex."""
        return max((len(s) for s in self.simplices), default=0) - 1

    def simplices_by_dim(self):
        out: Dict[int, list] = {}
        for s in self.simplices:
            out.setdefault(len(s) - 1, []).append(tuple(sorted(s)))
        for d in out:
            out[d].sort()
        return out

    def euler_char(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices)

    def reduced_euler_char(self) -> int:
        return self.euler_char() - 1

    # -- the action ----------------------------------------------------------

    def element_perms(self) -> Dict:
        """Vertex permutation for every group element (verified hom)."""
        if self._element_perm is None:
            fmap = {self.group.identity: tuple(range(self.nverts))}
            frontier = [self.group.identity]
            pairs = list(zip(self.group.generators, self.gen_vertex_perms))
            while frontier:
                new = []
                for x in frontier:
                    fx = fmap[x]
                    for g, fg in pairs:
                        y = perm_mul(g, x)
                        fy = perm_mul(fg, fx)
                        if y in fmap:
                            if fmap[y] != fy:
                                raise GroupError(
                                    "vertex permutations do not define an "
                                    "action of the group")
                        else:
                            fmap[y] = fy
                            new.append(y)
                frontier = new
            if len(fmap) != self.group.order:
                raise GroupError("generators do not generate the group")
            self._element_perm = fmap
        return self._element_perm

    def act_vertex(self, g: Perm, v: int) -> int:
        return self.element_perms()[tuple(g)][v]

    def act_simplex(self, g: Perm, s) -> frozenset:
        p = self.element_perms()[tuple(g)]
        return frozenset(p[v] for v in s)

    def vertex_stabilizer(self, v: int) -> Subgroup:
        return self.group.subgroup(
            [g for g, p in self.element_perms().items() if p[v] == v])

    def vertex_orbits(self):
        """Orbits of the vertex action, each sorted, ordered by minimum."""
        perms = list(self.element_perms().values())
        seen = set()
        orbits = []
        for v in range(self.nverts):
            if v in seen:
                continue
            orb = sorted({p[v] for p in perms})
            seen.update(orb)
            orbits.append(tuple(orb))
        return orbits

    def __repr__(self):
        return (f"GComplex(nverts={self.nverts}, "
                f"simplices={len(self.simplices)}, dim={self.dim})")


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    message: str = ""
    offender: Optional[tuple] = None   # (element, simplex) for action faults


def validate(X: GComplex) -> ValidationReport:
    """Check face closure, simpliciality and the pointwise-fix condition."""
    for s in X.simplices:
        if len(s) > 1:
            for face in combinations(sorted(s), len(s) - 1):
                if frozenset(face) not in X.simplices:
                    return ValidationReport(
                        False, "missing face", (None, tuple(sorted(s))))
    try:
        perms = X.element_perms()
    except GroupError as exc:
        return ValidationReport(False, str(exc))
    for g, p in perms.items():
        for s in X.simplices:
            img = frozenset(p[v] for v in s)
            if img not in X.simplices:
                return ValidationReport(
                    False, "action does not preserve simplices",
                    (g, tuple(sorted(s))))
            if img == s and any(p[v] != v for v in s):
                return ValidationReport(
                    False, "simplex fixed setwise but not pointwise",
                    (g, tuple(sorted(s))))
    return ValidationReport(True)


def barycentric_subdivision(X: GComplex) -> GComplex:
    """Subdivision with one vertex per simplex; regularizes the action."""
    sims = sorted(X.simplices, key=lambda s: (len(s), tuple(sorted(s))))
    index = {s: i for i, s in enumerate(sims)}
    perms = X.element_perms()
    for g, p in perms.items():
        for s in sims:
            if frozenset(p[v] for v in s) not in index:
                raise GroupError("action is not simplicial")

    # chains of simplices strictly ordered by inclusion
    chains = set()
    by_size: Dict[int, list] = {}
    for s in sims:
        by_size.setdefault(len(s), []).append(s)
    ordered = sorted(X.simplices, key=len)
    chain_stack = [(s,) for s in ordered]
    while chain_stack:
        chain = chain_stack.pop()
        chains.add(frozenset(index[s] for s in chain))
        top = chain[-1]
        for s in ordered:
            if len(s) > len(top) and top < s:
                chain_stack.append(chain + (s,))

    gen_perms = []
    for gp in (perms[g] for g in X.group.generators):
        gen_perms.append(tuple(
            index[frozenset(gp[v] for v in s)] for s in sims))
    return GComplex(X.group, len(sims), chains, gen_perms)


def fixed_subcomplex(X: GComplex, H) -> GComplex:
    """Subcomplex of simplices fixed pointwise by every element of H.

    Vertex numbering is preserved; the result carries the trivial action.
    """
    if isinstance(H, Subgroup):
        helements = H.elements
    else:
        helements = [tuple(h) for h in H]
    perms = X.element_perms()
    hperms = [perms[h] for h in helements]
    fixed_verts = {v for v in range(X.nverts)
                   if all(p[v] == v for p in hperms)}
    sims = [s for s in X.simplices if s <= fixed_verts]
    return GComplex(trivial_group(), X.nverts, sims, [])


def cone(X: GComplex) -> GComplex:
    """Cone with one new group-fixed apex vertex."""
    apex = X.nverts
    sims = set(X.simplices)
    sims.add(frozenset([apex]))
    sims.update(frozenset(s | {apex}) for s in X.simplices)
    gen_perms = [tuple(p) + (apex,) for p in X.gen_vertex_perms]
    return GComplex(X.group, X.nverts + 1, sims, gen_perms)


def join(X: GComplex, Y: GComplex) -> GComplex:
    """Join with the diagonal action; Y's vertices are shifted by X.nverts."""
    if X.group is not Y.group and (
            X.group.element_set() != Y.group.element_set()
            or X.group.generators != Y.group.generators):
        raise GroupError("join requires complexes over the same group")
    off = X.nverts
    sims = set(X.simplices)
    ysims = [frozenset(off + v for v in s) for s in Y.simplices]
    sims.update(ysims)
    for sx in X.simplices:
        for sy in ysims:
            sims.add(sx | sy)
    gen_perms = [
        tuple(px) + tuple(off + v for v in py)
        for px, py in zip(X.gen_vertex_perms, Y.gen_vertex_perms)
    ]
    return GComplex(X.group, X.nverts + Y.nverts, sims, gen_perms)


# ---------------------------------------------------------------------------
# homology


def boundary_matrices(X: GComplex, reduced: bool = False):
    """Boundary matrices over sorted oriented simplices, degree 0..dim.

    With reduced=True an augmentation row (vertex -> 1) is added in degree 0.
    """
    by_dim = X.simplices_by_dim()
    dims = sorted(by_dim)
    mats = {}
    index = {d: {s: i for i, s in enumerate(by_dim[d])} for d in dims}
    for d in dims:
        if d == 0:
            if reduced:
                mats[0] = [[1] * len(by_dim[0])]
            else:
                mats[0] = [[0] * len(by_dim[0])] if by_dim[0] else [[]]
            continue
        rows = len(by_dim[d - 1])
        cols = len(by_dim[d])
        M = [[0] * cols for _ in range(rows)]
        for j, s in enumerate(by_dim[d]):
            for k in range(len(s)):
                face = s[:k] + s[k + 1:]
                M[index[d - 1][face]][j] = (-1) ** k
        mats[d] = M
    return mats


@dataclass(frozen=True)
class HomologySummary:
    """Per-degree (rank, torsion) data."""

    groups: tuple      # tuple of (rank, tuple_of_torsion_coefficients)
    coefficients: str  # "Z" or "Z/p"
    reduced: bool

    def betti(self, d: int) -> int:
        return self.groups[d][0] if 0 <= d < len(self.groups) else 0

    def torsion(self, d: int):
        return self.groups[d][1] if 0 <= d < len(self.groups) else ()

    def is_trivial(self) -> bool:
        return all(r == 0 and not t for r, t in self.groups)


def homology(X: GComplex, coefficients="Z", reduced: bool = False
             ) -> HomologySummary:
    """Simplicial homology via Smith normal form (or GF(p) ranks)."""
    by_dim = X.simplices_by_dim()
    if not by_dim:
        return HomologySummary((), "Z" if coefficients == "Z" else
                               f"Z/{coefficients}", reduced)
    top = max(by_dim)
    counts = {d: len(by_dim.get(d, ())) for d in range(top + 1)}
    mats = boundary_matrices(X, reduced=reduced)
    out = []
    for d in range(top + 1):
        n_d = counts[d]
        Md = mats.get(d)
        up = mats.get(d + 1)
        if coefficients == "Z":
            rank_d = len(smith_normal_form(Md)) if Md and Md[0] else 0
            if up and up[0]:
                sn_up = smith_normal_form(up)
            else:
                sn_up = []
            rank_up = len(sn_up)
            betti = n_d - rank_d - rank_up
            torsion = tuple(x for x in sn_up if x > 1)
            out.append((betti, torsion))
        else:
            p = int(coefficients)
            rank_d = gfp_rank(Md, p) if Md and Md[0] else 0
            rank_up = gfp_rank(up, p) if up and up[0] else 0
            out.append((n_d - rank_d - rank_up, ()))
    label = "Z" if coefficients == "Z" else f"Z/{coefficients}"
    return HomologySummary(tuple(out), label, reduced)


# ---------------------------------------------------------------------------
# points of the realisation


def validate_point(X: GComplex, weights: Dict[int, Fraction]) -> None:
    support = frozenset(v for v, w in weights.items() if w != 0)
    if not support:
        raise GroupError("point must have nonempty support")
    if support not in X.simplices:
        raise GroupError(f"support {tuple(sorted(support))} is not a simplex")
    if any(w < 0 for w in weights.values()):
        raise GroupError("weights must be nonnegative")
    if sum(weights.values()) != 1:
        raise GroupError("weights must sum to 1")


def make_point(X: GComplex, weights) -> Dict[int, Fraction]:
    pt = {int(v): Fraction(w) for v, w in weights.items() if Fraction(w) != 0}
    validate_point(X, pt)
    return pt


def vertex_point(X: GComplex, v: int) -> Dict[int, Fraction]:
    return make_point(X, {v: 1})


def act_point(X: GComplex, g: Perm, point: Dict[int, Fraction]):
    p = X.element_perms()[tuple(g)]
    return {p[v]: w for v, w in point.items()}


def l1_distance(p: Dict[int, Fraction], q: Dict[int, Fraction]):
    keys = set(p) | set(q)
    return sum(abs(p.get(v, 0) - q.get(v, 0)) for v in keys)


# ---------------------------------------------------------------------------
# constructors used across fixtures and tests


def full_simplex(n: int, group: Optional[FiniteGroup] = None,
                 gen_perms: Optional[Sequence[Perm]] = None) -> GComplex:
    """The full simplex on n+1 vertices."""
    verts = list(range(n + 1))
    sims = [frozenset(c) for k in range(1, n + 2)
            for c in combinations(verts, k)]
    if group is None:
        group = trivial_group()
        gen_perms = []
    return GComplex(group, n + 1, sims, gen_perms or [])


def boundary_simplex(n: int, group: Optional[FiniteGroup] = None,
                     gen_perms: Optional[Sequence[Perm]] = None) -> GComplex:
    """The boundary of the n-simplex (an (n-1)-sphere)."""
    verts = list(range(n + 1))
    sims = [frozenset(c) for k in range(1, n + 1)
            for c in combinations(verts, k)]
    if group is None:
        group = trivial_group()
        gen_perms = []
    return GComplex(group, n + 1, sims, gen_perms or [])


def point_complex(group: FiniteGroup) -> GComplex:
    """A single group-fixed vertex."""
    return GComplex(group, 1, [frozenset([0])],
                    [(0,)] * len(group.generators))
