"""Resolutions of equivariant complexes.

Given a complex X with group action and, for each vertex orbit, a fiber
complex carrying an action of the orbit representative's stabilizer, the
resolved complex replaces every vertex by a copy of its fiber: a simplex
mixes one nonempty fiber simplex per vertex of a base simplex.  Transport
elements identify the fiber over an arbitrary orbit vertex with the fiber
over the representative, which determines the action on the total space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Tuple

from .classify import cor27_bound, depth, is_dress
from .complexes import (
    GComplex,
    homology,
    l1_distance,
    point_complex,
    validate,
    validate_point,
)
from .groups import (
    FiniteGroup,
    GroupError,
    Perm,
    Subgroup,
    perm_inv,
    perm_mul,
)


@dataclass(frozen=True)
class OrbitData:
    """Fiber data for one vertex orbit of the base complex."""

    rep: int
    fiber: GComplex                      # carries the stabilizer action
    transport: Dict[int, Perm]           # vertex v -> g with g . rep = v

    def orbit_vertices(self):
        return sorted(self.transport)


@dataclass(frozen=True)
class ResolutionData:
    base: GComplex
    orbits: Tuple[OrbitData, ...]

    def orbit_of_vertex(self, v: int) -> OrbitData:
        for o in self.orbits:
            if v in o.transport:
                return o
        raise GroupError(f"vertex {v} not covered by any orbit")


def transport_elements(X: GComplex, rep: int) -> Dict[int, Perm]:
    """Deterministic transports g_v with g_v . rep = v over the orbit of rep.

    Breadth-first over the generators, so every transport is a shortest word.
    """
    perms = X.element_perms()
    gens = [(g, perms[g]) for g in X.group.generators]
    out = {rep: X.group.identity}
    frontier = [rep]
    while frontier:
        new = []
        for v in frontier:
            for g, p in gens:
                w = p[v]
                if w not in out:
                    out[w] = perm_mul(g, out[v])
                    new.append(w)
        frontier = new
    return out


def resolution_data(X: GComplex,
                    fiber_for_rep: Dict[int, GComplex]) -> ResolutionData:
    """Assemble resolution data from per-representative fibers.

    Keys of fiber_for_rep must be the minimal vertices of the orbits of X.
    """
    orbits = []
    for orbit in X.vertex_orbits():
        rep = orbit[0]
        if rep not in fiber_for_rep:
            raise GroupError(f"missing fiber for orbit representative {rep}")
        orbits.append(OrbitData(rep, fiber_for_rep[rep],
                                transport_elements(X, rep)))
    return ResolutionData(X, tuple(orbits))


def point_resolution_data(X: GComplex) -> ResolutionData:
    """Identity resolution: every fiber is a single stabilizer-fixed point."""
    fibers = {}
    for orbit in X.vertex_orbits():
        rep = orbit[0]
        fibers[rep] = point_complex(X.vertex_stabilizer(rep).as_group())
    return resolution_data(X, fibers)


def validate_resolution_data(data: ResolutionData) -> None:
    X = data.base
    rep_base = validate(X)
    if not rep_base.ok:
        raise GroupError(f"base complex invalid: {rep_base.message}")
    seen = set()
    for o in data.orbits:
        orbit = set(o.transport)
        if orbit & seen:
            raise GroupError("orbits overlap")
        seen |= orbit
        stab = X.vertex_stabilizer(o.rep)
        if o.fiber.group.element_set() != frozenset(stab.elements):
            raise GroupError(
                f"fiber group at {o.rep} is not the vertex stabilizer")
        fr = validate(o.fiber)
        if not fr.ok:
            raise GroupError(f"fiber at {o.rep} invalid: {fr.message}")
        if not o.fiber.simplices:
            raise GroupError(f"fiber at {o.rep} has no simplices")
        perms = X.element_perms()
        for v, g in o.transport.items():
            if perms[g][o.rep] != v:
                raise GroupError(f"transport element at {v} does not move "
                                 f"the representative there")
    if seen != set(range(X.nverts)):
        raise GroupError("orbits do not cover the base vertex set")


@dataclass
class ResolvedComplex:
    """The total complex plus the bookkeeping of its fiber decomposition."""

    complex: GComplex
    data: ResolutionData
    offsets: Dict[int, int]              # base vertex -> first global index
    base_of: Tuple[int, ...]             # global vertex -> base vertex

    def global_vertex(self, base_vertex: int, local: int) -> int:
        return self.offsets[base_vertex] + local

    def local_vertex(self, y: int) -> Tuple[int, int]:
        v = self.base_of[y]
        return v, y - self.offsets[v]

    def fiber_block(self, base_vertex: int):
        o = self.data.orbit_of_vertex(base_vertex)
        off = self.offsets[base_vertex]
        return range(off, off + o.fiber.nverts)


def resolve(data: ResolutionData, check: bool = True,
            max_simplices: int = 500_000) -> ResolvedComplex:
    """Build the resolved complex; validates its invariants unless check=False."""
    if check:
        validate_resolution_data(data)
    X = data.base
    G = X.group
    perms = X.element_perms()

    offsets: Dict[int, int] = {}
    base_of: List[int] = []
    n_total = 0
    fiber_at: Dict[int, OrbitData] = {}
    for v in range(X.nverts):
        o = data.orbit_of_vertex(v)
        fiber_at[v] = o
        offsets[v] = n_total
        n_total += o.fiber.nverts
        base_of.extend([v] * o.fiber.nverts)

    # simplices: one nonempty fiber simplex per vertex of a base simplex
    fiber_simplices: Dict[int, List[frozenset]] = {}
    for o in data.orbits:
        fiber_simplices[o.rep] = sorted(
            o.fiber.simplices, key=lambda s: (len(s), tuple(sorted(s))))
    total = 0
    sims = set()
    for s in X.simplices:
        sv = sorted(s)
        choices = [fiber_simplices[fiber_at[v].rep] for v in sv]
        count = 1
        for c in choices:
            count *= len(c)
        total += count
        if total > max_simplices:
            raise GroupError(
                f"resolved complex exceeds {max_simplices} simplices")
        for combo in product(*choices):
            sim = frozenset(
                offsets[v] + w for v, fs in zip(sv, combo) for w in fs)
            sims.add(sim)

    # action: (v, w) -> (g.v, a.w) with a = t_{g.v}^{-1} g t_v in G_rep
    gen_perms = []
    for g in G.generators:
        gp = perms[g]
        out = [0] * n_total
        for v in range(X.nverts):
            o = fiber_at[v]
            v2 = gp[v]
            a = perm_mul(perm_inv(o.transport[v2]),
                         perm_mul(g, o.transport[v]))
            try:
                fp = o.fiber.element_perms()[a]
            except KeyError:
                raise GroupError(
                    "transport conjugate leaves the stabilizer; resolution "
                    "data is inconsistent") from None
            off_v, off_v2 = offsets[v], offsets[v2]
            for w in range(o.fiber.nverts):
                out[off_v + w] = off_v2 + fp[w]
        gen_perms.append(tuple(out))

    Y = GComplex(G, n_total, sims, gen_perms)
    resolved = ResolvedComplex(Y, data, offsets, tuple(base_of))
    if check:
        rep = validate(Y)
        if not rep.ok:
            raise GroupError(f"resolved complex invalid: {rep.message}")
        check_partition_identity(resolved)
        n, k = X.dim, max(o.fiber.dim for o in data.orbits)
        if Y.dim > n * k + n + k:
            raise GroupError("dimension bound violated")
    return resolved


def check_partition_identity(res: ResolvedComplex) -> None:
    """Every simplex decomposes as a disjoint union of fiber simplices over a
    base simplex."""
    X = res.data.base
    for y in res.complex.simplices:
        by_base: Dict[int, set] = {}
        for w in y:
            by_base.setdefault(res.base_of[w], set()).add(w)
        if frozenset(by_base) not in X.simplices:
            raise GroupError("support of a simplex is not a base simplex")
        for v, part in by_base.items():
            o = res.data.orbit_of_vertex(v)
            local = frozenset(w - res.offsets[v] for w in part)
            if local not in o.fiber.simplices:
                raise GroupError("fiber part of a simplex is not a fiber "
                                 "simplex")
        if sum(len(p) for p in by_base.values()) != len(y):
            raise GroupError("partition identity failed")


def vertex_stabilizers_occur_in_fibers(res: ResolvedComplex) -> bool:
    """Each stabilizer of the total complex equals a fiber point stabilizer."""
    Y = res.complex
    fiber_stabs = []
    for o in res.data.orbits:
        for orbit_v in o.orbit_vertices():
            for w in range(o.fiber.nverts):
                y = res.global_vertex(orbit_v, w)
                fiber_stabs.append(Y.vertex_stabilizer(y).indices)
    fiber_stabs = set(fiber_stabs)
    return all(Y.vertex_stabilizer(y).indices in fiber_stabs
               for y in range(Y.nverts))


# ---------------------------------------------------------------------------
# simplicial maps


@dataclass(frozen=True)
class SimplicialMap:
    source: GComplex
    target: GComplex
    vertex_map: Tuple[int, ...]

    def __post_init__(self):
        for s in self.source.simplices:
            img = frozenset(self.vertex_map[v] for v in s)
            if img not in self.target.simplices:
                raise GroupError("map does not send simplices to simplices")

    def check_equivariant(self) -> bool:
        sp = self.source.element_perms()
        tp = self.target.element_perms()
        for g in self.source.group.generators:
            pg, qg = sp[g], tp[g]
            if any(self.vertex_map[pg[v]] != qg[self.vertex_map[v]]
                   for v in range(self.source.nverts)):
                return False
        return True

    def apply_point(self, point: Dict[int, Fraction]) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        for v, wgt in point.items():
            tv = self.vertex_map[v]
            out[tv] = out.get(tv, Fraction(0)) + wgt
        return out


def induced_map(res: ResolvedComplex, res2: ResolvedComplex,
                taus: Dict[int, Tuple[int, ...]]) -> SimplicialMap:
    """Map of resolved complexes induced by per-orbit fiber maps.

    Both resolutions must share the base, representatives and transports;
    each tau must be simplicial and commute with the stabilizer action.
    """
    if res.data.base is not res2.data.base:
        raise GroupError("resolutions must share the base complex")
    reps = {o.rep: o for o in res.data.orbits}
    reps2 = {o.rep: o for o in res2.data.orbits}
    if set(reps) != set(reps2):
        raise GroupError("orbit representatives differ")
    for r in reps:
        if reps[r].transport != reps2[r].transport:
            raise GroupError("transports differ between resolutions")
    for r, tau in taus.items():
        o, o2 = reps[r], reps2[r]
        for s in o.fiber.simplices:
            if frozenset(tau[w] for w in s) not in o2.fiber.simplices:
                raise GroupError(f"tau at {r} is not simplicial")
        fp = o.fiber.element_perms()
        fp2 = o2.fiber.element_perms()
        for a in o.fiber.group.generators:
            pa, qa = fp[a], fp2[a]
            if any(tau[pa[w]] != qa[tau[w]] for w in range(o.fiber.nverts)):
                raise GroupError(f"tau at {r} does not commute with the "
                                 f"stabilizer action")
    vm = [0] * res.complex.nverts
    for y in range(res.complex.nverts):
        v, w = res.local_vertex(y)
        tau = taus[res.data.orbit_of_vertex(v).rep]
        vm[y] = res2.global_vertex(v, tau[w])
    m = SimplicialMap(res.complex, res2.complex, tuple(vm))
    if not m.check_equivariant():
        raise GroupError("induced map is not equivariant")
    return m


def canonical_projection(res: ResolvedComplex) -> SimplicialMap:
    """The collapse of every fiber onto its base vertex."""
    m = SimplicialMap(res.complex, res.data.base, res.base_of)
    if not m.check_equivariant():
        raise GroupError("projection is not equivariant")
    return m


# ---------------------------------------------------------------------------
# the alternative model: pairs (lambda_x, eta_x)


@dataclass(frozen=True)
class AltPoint:
    """Point written as sum_x lambda_x . eta_x with eta_x a fiber point.

    Fibers with lambda_x = 0 are omitted; eta weights are over global vertex
    indices of the block over x and sum to 1.
    """

    parts: Tuple[Tuple[int, Fraction, Tuple[Tuple[int, Fraction], ...]], ...]

    def lambdas(self) -> Dict[int, Fraction]:
        return {x: lam for x, lam, _ in self.parts}

    def eta(self, x: int) -> Optional[Dict[int, Fraction]]:
        for v, _, eta in self.parts:
            if v == x:
                return dict(eta)
        return None


def to_alt(res: ResolvedComplex, point: Dict[int, Fraction]) -> AltPoint:
    validate_point(res.complex, point)
    groups: Dict[int, Dict[int, Fraction]] = {}
    for y, w in point.items():
        if w == 0:
            continue
        groups.setdefault(res.base_of[y], {})[y] = w
    parts = []
    for x in sorted(groups):
        lam = sum(groups[x].values())
        eta = tuple(sorted((y, w / lam) for y, w in groups[x].items()))
        parts.append((x, lam, eta))
    return AltPoint(tuple(parts))


def from_alt(res: ResolvedComplex, alt: AltPoint) -> Dict[int, Fraction]:
    support = frozenset(x for x, lam, _ in alt.parts if lam != 0)
    if support not in res.data.base.simplices:
        raise GroupError("alt-form support is not a base simplex")
    point: Dict[int, Fraction] = {}
    for x, lam, eta in alt.parts:
        if lam == 0:
            continue
        block = set(res.fiber_block(x))
        for y, w in eta:
            if y not in block:
                raise GroupError("eta weight outside its fiber block")
            point[y] = point.get(y, Fraction(0)) + lam * w
    validate_point(res.complex, point)
    return point


def d1_metric(res: ResolvedComplex, a: AltPoint, b: AltPoint) -> Fraction:
    """l^1 distance transported through the alternative model."""
    return l1_distance(from_alt(res, a), from_alt(res, b))


def d1_bound_check(res: ResolvedComplex, a: AltPoint, b: AltPoint):
    """Triangle-inequality estimate
    d1(a,b) <= sum_x lambda_x d(eta_x, theta_x) + sum_x |lambda_x - mu_x|.

    Returns (lhs, rhs, ok); when only one side charges a fiber the missing
    point is taken equal to the present one, which keeps the bound exact.
    """
    lhs = d1_metric(res, a, b)
    lam, mu = a.lambdas(), b.lambdas()
    rhs = Fraction(0)
    for x in set(lam) | set(mu):
        la = lam.get(x, Fraction(0))
        mb = mu.get(x, Fraction(0))
        eta = a.eta(x)
        theta = b.eta(x)
        if eta is not None and theta is not None:
            rhs += la * l1_distance(eta, theta)
        rhs += abs(la - mb)
    return lhs, rhs, lhs <= rhs


# ---------------------------------------------------------------------------
# iterated resolution until stabilizers are tame


@dataclass
class RecursionReport:
    complex: GComplex
    steps: int
    obligations: List[Subgroup] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    dimension: int = 0
    dimension_bound: Optional[int] = None

    @property
    def bound_satisfied(self) -> Optional[bool]:
        if self.dimension_bound is None:
            return None
        return self.dimension <= self.dimension_bound


def recursive_resolution(X: GComplex,
                         provider: Callable[[FiniteGroup], Optional[GComplex]],
                         max_steps: int = 32) -> RecursionReport:
    """Resolve repeatedly until all vertex stabilizers are in the Dress family.

    For every orbit whose stabilizer is outside the family, the provider may
    supply a fixed-point-free contractible complex over that stabilizer; a
    declined orbit is left alone and recorded as an obligation.
    """
    G = X.group
    current = X
    declined: List[Subgroup] = []
    declined_sets = set()
    notes: List[str] = []
    steps = 0
    while steps < max_steps:
        orbits = current.vertex_orbits()
        bad = []
        for orbit in orbits:
            stab = current.vertex_stabilizer(orbit[0])
            if stab.indices in declined_sets:
                continue
            if is_dress(stab.as_group()).verdict is not True:
                bad.append((orbit[0], stab))
        if not bad:
            break
        fibers: Dict[int, GComplex] = {}
        progress = False
        for orbit in orbits:
            rep = orbit[0]
            stab = current.vertex_stabilizer(rep)
            entry = next((s for v, s in bad if v == rep), None)
            if entry is None:
                fibers[rep] = point_complex(stab.as_group())
                continue
            E = provider(stab.as_group())
            if E is None:
                declined.append(stab)
                declined_sets.add(stab.indices)
                fibers[rep] = point_complex(stab.as_group())
                continue
            note = _check_provider_complex(E, stab)
            if note:
                notes.append(f"step {steps}, stabilizer of order "
                             f"{stab.order}: {note}")
            fibers[rep] = E
            progress = True
        if not progress:
            break
        current = resolve(resolution_data(current, fibers)).complex
        steps += 1
    rep = RecursionReport(current, steps, declined, notes,
                          max(current.dim, 0))
    try:
        rep.dimension_bound = cor27_bound(depth(G).depth)
    except GroupError:
        rep.dimension_bound = None
    return rep


def _check_provider_complex(E: GComplex, stab: Subgroup) -> Optional[str]:
    """Hard-checks validity and fixed-point freeness (needed for progress);
    unverified contractibility is only reported, not enforced."""
    from .complexes import fixed_subcomplex
    if E.group.element_set() != frozenset(stab.elements):
        raise GroupError("provider complex has the wrong group")
    r = validate(E)
    if not r.ok:
        raise GroupError(f"provider complex invalid: {r.message}")
    if fixed_subcomplex(E, stab).simplices:
        raise GroupError("provider complex has global fixed points")
    if not homology(E, reduced=True).is_trivial():
        return "fiber not verified contractible (reduced homology nonzero)"
    return None
