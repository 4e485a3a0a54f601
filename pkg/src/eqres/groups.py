"""Exact permutation-group arithmetic.

Groups are represented faithfully as permutation groups on {0, ..., degree-1}.
Permutations are tuples of images, composed right-to-left: (a*b)(i) = a(b(i)).
All derived data (subgroup lattices, conjugacy classes, quotients, homs) is
computed exactly and canonically sorted so that outputs are deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

Perm = tuple

DEFAULT_ORDER_CAP = 2000


class GroupError(Exception):
    pass


class EnumerationIncomplete(GroupError):
    """Raised when exhaustive enumeration would exceed the requested cap."""


class HomError(GroupError):
    """Raised when generator images do not extend to a homomorphism."""


# ---------------------------------------------------------------------------
# permutation helpers


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def perm_mul(a: Perm, b: Perm) -> Perm:
    """Composite permutation applying b first: (a*b)(i) = a(b(i))."""
    return tuple(a[x] for x in b)


def perm_inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def perm_order(a: Perm) -> int:
    e = identity_perm(len(a))
    g, k = a, 1
    while g != e:
        g = perm_mul(a, g)
        k += 1
    return k


def is_perm(a: Sequence[int], degree: int) -> bool:
    return len(a) == degree and sorted(a) == list(range(degree))


def cycles_to_perm(cycles: Iterable[Sequence[int]], degree: int) -> Perm:
    out = list(range(degree))
    for cyc in cycles:
        m = len(cyc)
        for i in range(m):
            x = cyc[i]
            if not 0 <= x < degree:
                raise GroupError(f"cycle entry {x} out of range for degree {degree}")
            out[x] = cyc[(i + 1) % m]
    if not is_perm(out, degree):
        raise GroupError("cycles overlap or repeat entries")
    return tuple(out)


def perm_to_cycles(a: Perm) -> list:
    """Nontrivial cycles of a permutation, each rotated to start at its minimum."""
    seen = [False] * len(a)
    cycles = []
    for start in range(len(a)):
        if seen[start] or a[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        x = a[start]
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = a[x]
        cycles.append(cyc)
    return cycles


def mulclose(generators: Sequence[Perm], degree: int, cap: Optional[int] = None):
    """Multiplicative closure of a generating set, returned as a sorted tuple."""
    gens = [tuple(g) for g in generators]
    for g in gens:
        if not is_perm(g, degree):
            raise GroupError(f"not a permutation of degree {degree}: {g}")
    e = identity_perm(degree)
    els = {e}
    els.update(gens)
    frontier = list(els)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = perm_mul(x, g)
                if y not in els:
                    els.add(y)
                    new.append(y)
                    if cap is not None and len(els) > cap:
                        raise EnumerationIncomplete(
                            f"closure exceeds cap {cap}")
        frontier = new
    return tuple(sorted(els))


def closure(generators: Sequence[Perm], degree: Optional[int] = None):
    """Full group generated by the given permutations, canonically sorted."""
    gens = [tuple(g) for g in generators]
    if degree is None:
        if not gens:
            raise GroupError("degree required for an empty generating set")
        degree = len(gens[0])
    for g in gens:
        if len(g) != degree:
            raise GroupError("degree mismatch among generators")
    return mulclose(gens, degree)


# ---------------------------------------------------------------------------
# groups


class FiniteGroup:
    """A finite permutation group on {0..degree-1} given by generators.

    Immutable after construction; element lists, index tables and subgroup
    lattices are cached lazily on the instance.
    """

    def __init__(self, degree: int, generators: Sequence[Perm], _elements=None):
        if degree < 1:
            raise GroupError("degree must be positive")
        gens = tuple(tuple(g) for g in generators)
        for g in gens:
            if not is_perm(g, degree):
                raise GroupError(f"invalid generator for degree {degree}: {g}")
        self.degree = degree
        self.generators = gens
        self._elements = tuple(_elements) if _elements is not None else None
        self._index: Optional[dict] = None
        self._mul_table = None
        self._inv_table = None
        self._subgroups = None
        self._classes = None

    # -- elements ----------------------------------------------------------

    @property
    def elements(self):
        if self._elements is None:
            self._elements = mulclose(self.generators, self.degree)
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return identity_perm(self.degree)

    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    def index_of(self, g: Perm) -> int:
        if self._index is None:
            self._index = {g: i for i, g in enumerate(self.elements)}
        try:
            return self._index[tuple(g)]
        except KeyError:
            raise GroupError(f"element not in group: {g}") from None

    def __contains__(self, g) -> bool:
        if self._index is None:
            self._index = {h: i for i, h in enumerate(self.elements)}
        return tuple(g) in self._index

    # -- index arithmetic ----------------------------------------------------

    def table(self):
        """Multiplication table over element indices; built once on demand."""
        if self._mul_table is None:
            els = self.elements
            idx = {g: i for i, g in enumerate(els)}
            self._mul_table = [
                [idx[perm_mul(a, b)] for b in els] for a in els
            ]
            self._index = idx
        return self._mul_table

    def inverses(self):
        if self._inv_table is None:
            els = self.elements
            idx = {g: i for i, g in enumerate(els)}
            self._inv_table = [idx[perm_inv(g)] for g in els]
        return self._inv_table

    def element_order(self, g: Perm) -> int:
        return perm_order(tuple(g))

    def is_abelian(self) -> bool:
        els = self.elements
        return all(
            perm_mul(a, b) == perm_mul(b, a)
            for i, a in enumerate(els)
            for b in els[i + 1:]
        )

    def is_cyclic(self) -> bool:
        n = self.order
        return any(perm_order(g) == n for g in self.elements)

    # -- subgroup helpers ----------------------------------------------------

    def subgroup(self, elements) -> "Subgroup":
        """Subgroup from an iterable of element permutations or indices."""
        idxs = set()
        for x in elements:
            idxs.add(x if isinstance(x, int) else self.index_of(x))
        return Subgroup(self, frozenset(idxs))

    def generated_subgroup(self, gens: Sequence[Perm]) -> "Subgroup":
        els = mulclose([tuple(g) for g in gens], self.degree)
        return self.subgroup(els)

    def trivial_subgroup(self) -> "Subgroup":
        return self.subgroup([self.identity])

    def full_subgroup(self) -> "Subgroup":
        return self.subgroup(range(self.order))

    def __repr__(self):
        return f"FiniteGroup(degree={self.degree}, order={self.order})"


class Subgroup:
    """A subgroup of a FiniteGroup, identified by its sorted element list."""

    __slots__ = ("group", "indices", "_key", "_gens")

    def __init__(self, group: FiniteGroup, indices: frozenset):
        self.group = group
        self.indices = frozenset(indices)
        self._key = None
        self._gens = None

    @property
    def key(self):
        if self._key is None:
            self._key = tuple(sorted(self.indices))
        return self._key

    @property
    def order(self) -> int:
        return len(self.indices)

    @property
    def elements(self):
        els = self.group.elements
        return tuple(els[i] for i in self.key)

    def __contains__(self, g) -> bool:
        i = g if isinstance(g, int) else self.group.index_of(g)
        return i in self.indices

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.group is other.group
            and self.indices == other.indices
        )

    def __hash__(self):
        return hash((id(self.group), self.indices))

    def __le__(self, other: "Subgroup") -> bool:
        return self.indices <= other.indices

    def __lt__(self, other: "Subgroup") -> bool:
        return self.indices < other.indices

    def small_generators(self):
        """A short generating list, found greedily over the sorted elements."""
        if self._gens is None:
            els = self.group.elements
            gens: list = []
            have = {self.group.identity}
            for i in self.key:
                g = els[i]
                if g not in have:
                    gens.append(g)
                    have = set(mulclose(gens, self.group.degree))
            self._gens = tuple(gens)
        return self._gens

    def as_group(self) -> FiniteGroup:
        """The same subgroup as a standalone FiniteGroup (same degree)."""
        return FiniteGroup(
            self.group.degree, self.small_generators(), _elements=self.elements
        )

    def conjugate(self, g: Perm) -> "Subgroup":
        gi = perm_inv(tuple(g))
        els = [perm_mul(perm_mul(tuple(g), h), gi) for h in self.elements]
        return self.group.subgroup(els)

    def is_subgroup_closed(self) -> bool:
        els = set(self.elements)
        if self.group.identity not in els:
            return False
        return all(perm_mul(a, b) in els for a in els for b in els)

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.group!r})"


@dataclass(frozen=True)
class SubgroupClass:
    """A conjugacy class of subgroups; representative is the lex-least member."""

    representative: Subgroup
    members: tuple
    index: int

    @property
    def order(self) -> int:
        return self.representative.order

    def __len__(self):
        return len(self.members)


# ---------------------------------------------------------------------------
# subgroup enumeration


def _closure_idx(table, gens):
    """Closure of generator indices inside a multiplication table."""
    els = {0}
    els.update(gens)
    frontier = list(els)
    while frontier:
        new = []
        for x in frontier:
            row = table[x]
            for g in gens:
                y = row[g]
                if y not in els:
                    els.add(y)
                    new.append(y)
        frontier = new
    return frozenset(els)


def _subgroup_search(G: FiniteGroup, max_new_gens: Optional[int]):
    """BFS over the lattice: repeatedly adjoin one element to known subgroups.

    Every subgroup is generated by finitely many elements, so the search is
    exhaustive when max_new_gens is None.
    """
    T = G.table()
    n = G.order
    triv = frozenset({0})
    found = {triv: ()}
    queue = deque([(triv, ())])
    while queue:
        H, gens = queue.popleft()
        if max_new_gens is not None and len(gens) >= max_new_gens:
            continue
        for g in range(1, n):
            if g in H:
                continue
            new_gens = gens + (g,)
            K = _closure_idx(T, new_gens)
            if K not in found:
                found[K] = new_gens
                queue.append((K, new_gens))
    subs = [Subgroup(G, s) for s in found]
    subs.sort(key=lambda S: (S.order, S.key))
    return subs


def all_subgroups(G: FiniteGroup, order_cap: int = DEFAULT_ORDER_CAP):
    """Every subgroup of G, sorted by order then lexicographically.

    Exhaustive; raises EnumerationIncomplete when |G| exceeds order_cap.
    """
    if G.order > order_cap:
        raise EnumerationIncomplete(
            f"|G| = {G.order} exceeds enumeration cap {order_cap}")
    if G._subgroups is None:
        G._subgroups = tuple(_subgroup_search(G, None))
    return list(G._subgroups)


def bounded_generator_subgroups(G: FiniteGroup, max_gens: int = 3):
    """Heuristic fallback above the cap: subgroups with at most max_gens
    generators.  Possibly incomplete; callers must flag results accordingly."""
    return _subgroup_search(G, max_gens)


def conjugacy_classes_of_subgroups(G: FiniteGroup,
                                   order_cap: int = DEFAULT_ORDER_CAP):
    """Conjugacy classes of subgroups, sorted by representative order."""
    if G._classes is not None:
        return list(G._classes)
    subs = all_subgroups(G, order_cap)
    T = G.table()
    inv = G.inverses()
    gen_idx = [G.index_of(g) for g in G.generators]
    position = {S.indices: i for i, S in enumerate(subs)}
    assigned = [False] * len(subs)
    classes = []
    for i, S in enumerate(subs):
        if assigned[i]:
            continue
        orbit = {S.indices}
        frontier = [S.indices]
        while frontier:
            new = []
            for H in frontier:
                for g in gen_idx:
                    gi = inv[g]
                    K = frozenset(T[T[g][h]][gi] for h in H)
                    if K not in orbit:
                        orbit.add(K)
                        new.append(K)
            frontier = new
        members = sorted((subs[position[H]] for H in orbit),
                         key=lambda M: M.key)
        for M in members:
            assigned[position[M.indices]] = True
        classes.append(SubgroupClass(members[0], tuple(members), len(classes)))
    G._classes = tuple(classes)
    return list(classes)


# ---------------------------------------------------------------------------
# normalizers, quotients


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    T = G.table()
    inv = G.inverses()
    Hset = H.indices
    out = [
        g for g in range(G.order)
        if all(T[T[g][h]][inv[g]] in Hset for h in Hset)
    ]
    return Subgroup(G, frozenset(out))


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    return normalizer(G, H).order == G.order


def left_cosets(G: FiniteGroup, H: Subgroup):
    """Left cosets gH as frozensets of indices, sorted by smallest member."""
    T = G.table()
    seen = set()
    cosets = []
    for g in range(G.order):
        if g in seen:
            continue
        c = frozenset(T[g][h] for h in H.indices)
        seen |= c
        cosets.append(c)
    cosets.sort(key=min)
    return cosets


def quotient(G: FiniteGroup, N: Subgroup):
    """Quotient group G/N as a permutation group on cosets, plus projection."""
    if not is_normal(G, N):
        raise GroupError("quotient by a non-normal subgroup")
    T = G.table()
    cosets = left_cosets(G, N)
    coset_of = {}
    for i, c in enumerate(cosets):
        for x in c:
            coset_of[x] = i
    reps = [min(c) for c in cosets]

    def induced(gidx):
        return tuple(coset_of[T[gidx][r]] for r in reps)

    gen_imgs = [induced(G.index_of(g)) for g in G.generators]
    Q = FiniteGroup(len(cosets), gen_imgs)
    if Q.order * N.order != G.order:
        raise GroupError("coset action is not faithful; quotient failed")
    proj = GroupHom(G, Q, gen_imgs)
    return Q, proj


# ---------------------------------------------------------------------------
# homomorphisms


class GroupHom:
    """A homomorphism given by generator images, verified on the full closure.

    The element map is built by breadth-first search over words; any
    inconsistency between word paths raises HomError, so a constructed map is
    guaranteed well-defined and multiplicative.
    """

    def __init__(self, source: FiniteGroup, target: FiniteGroup,
                 gen_images: Sequence[Perm]):
        if len(gen_images) != len(source.generators):
            raise HomError("one image required per source generator")
        self.source = source
        self.target = target
        self.gen_images = tuple(tuple(g) for g in gen_images)
        for img in self.gen_images:
            if img not in target:
                raise HomError(f"image not in target group: {img}")
        self._map: Optional[dict] = None

    @property
    def element_map(self) -> Mapping:
        if self._map is None:
            fmap = {self.source.identity: self.target.identity}
            frontier = [self.source.identity]
            pairs = list(zip(self.source.generators, self.gen_images))
            while frontier:
                new = []
                for x in frontier:
                    fx = fmap[x]
                    for g, fg in pairs:
                        y = perm_mul(x, g)
                        fy = perm_mul(fx, fg)
                        if y in fmap:
                            if fmap[y] != fy:
                                raise HomError(
                                    "generator images do not define a "
                                    "homomorphism")
                        else:
                            fmap[y] = fy
                            new.append(y)
                frontier = new
            if len(fmap) != self.source.order:
                raise HomError("generators do not generate the source group")
            self._map = fmap
        return self._map

    def __call__(self, g: Perm) -> Perm:
        return self.element_map[tuple(g)]

    def image(self) -> Subgroup:
        return self.target.subgroup(set(self.element_map.values()))

    def is_surjective(self) -> bool:
        return self.image().order == self.target.order

    def kernel(self) -> Subgroup:
        e = self.target.identity
        return self.source.subgroup(
            [g for g, fg in self.element_map.items() if fg == e])

    def image_of_subgroup(self, H: Subgroup) -> Subgroup:
        return self.target.subgroup({self(g) for g in H.elements})

    def preimage_of_subgroup(self, K: Subgroup) -> Subgroup:
        kset = set(K.elements)
        return self.source.subgroup(
            [g for g, fg in self.element_map.items() if fg in kset])

    def __repr__(self):
        return f"GroupHom({self.source!r} -> {self.target!r})"


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, G.generators)


# ---------------------------------------------------------------------------
# constructors


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    if n == 1:
        return FiniteGroup(1, [])
    rot = tuple((i + 1) % n for i in range(n))
    return FiniteGroup(n, [rot])


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n acting on n points (n >= 3)."""
    if n < 3:
        raise GroupError("dihedral(n) requires n >= 3; use cyclic/products")
    rot = tuple((i + 1) % n for i in range(n))
    refl = tuple((-i) % n for i in range(n))
    return FiniteGroup(n, [rot, refl])


def symmetric(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("symmetric(n) requires n >= 1")
    if n == 1:
        return FiniteGroup(1, [])
    swap = cycles_to_perm([[0, 1]], n)
    if n == 2:
        return FiniteGroup(2, [swap])
    rot = tuple((i + 1) % n for i in range(n))
    return FiniteGroup(n, [swap, rot])


def alternating(n: int) -> FiniteGroup:
    if n < 3:
        return FiniteGroup(max(n, 1), [])
    three = cycles_to_perm([[0, 1, 2]], n)
    if n == 3:
        return FiniteGroup(3, [three])
    if n % 2 == 1:
        big = tuple((i + 1) % n for i in range(n))
    else:
        big = cycles_to_perm([list(range(1, n))], n)
    return FiniteGroup(n, [three, big])


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    d = G.degree + H.degree
    gens = []
    for g in G.generators:
        gens.append(tuple(g) + tuple(G.degree + i for i in range(H.degree)))
    for h in H.generators:
        gens.append(tuple(range(G.degree)) + tuple(G.degree + x for x in h))
    return FiniteGroup(d, gens)


def quaternion_group() -> FiniteGroup:
    """Q8 in its left-regular representation on 8 points."""
    # units 1, -1, i, -i, j, -j, k, -k encoded as (sign, axis)
    units = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)]
    pos = {u: n for n, u in enumerate(units)}

    def qmul(a, b):
        sa, xa = a
        sb, xb = b
        if xa == 0:
            return (sa * sb, xb)
        if xb == 0:
            return (sa * sb, xa)
        if xa == xb:
            return (-sa * sb, 0)
        # i*j=k, j*k=i, k*i=j and anti-commutativity
        table = {(1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
                 (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2)}
        s, x = table[(xa, xb)]
        return (s * sa * sb, x)

    def left_perm(u):
        return tuple(pos[qmul(u, v)] for v in units)

    return FiniteGroup(8, [left_perm((1, 1)), left_perm((1, 2))])


# ---------------------------------------------------------------------------
# semidirect products with an abelian kernel


def _vec_index(moduli):
    """Mixed-radix indexing of the points of Z/m1 x ... x Z/mk."""
    points = [()]
    for m in moduli:
        points = [p + (r,) for p in points for r in range(m)]
    index = {p: i for i, p in enumerate(points)}
    return points, index


class SemidirectGroup:
    """A ⋊ Q for abelian A = Z/m1 x ... x Z/mk, realized on A-points plus the
    permutation domain of Q.  Exposes translation/vector bookkeeping that the
    plain FiniteGroup forgets."""

    def __init__(self, moduli, Q: FiniteGroup, action: Sequence):
        self.moduli = tuple(int(m) for m in moduli)
        if any(m < 1 for m in self.moduli):
            raise GroupError("moduli must be positive")
        self.qgroup = Q
        k = len(self.moduli)
        self.points, self.point_index = _vec_index(self.moduli)
        na = len(self.points)
        degree = na + Q.degree
        mats = [tuple(tuple(int(x) for x in row) for row in M) for M in action]
        if len(mats) != len(Q.generators):
            raise GroupError("one action matrix per Q generator required")
        for M in mats:
            if len(M) != k or any(len(row) != k for row in M):
                raise GroupError("action matrices must be k x k")

        def apply_mat(M, v):
            return tuple(
                sum(M[i][j] * v[j] for j in range(k)) % self.moduli[i]
                for i in range(k))

        for M in mats:
            image = {apply_mat(M, p) for p in self.points}
            if len(image) != na:
                raise GroupError("action matrix is not an automorphism")

        gens = []
        # translation generators, one per coordinate with modulus > 1
        self._translation_gens = []
        for i in range(k):
            if self.moduli[i] == 1:
                continue
            e_i = tuple(1 if j == i else 0 for j in range(k))
            gens.append(self._affine_perm(e_i, None, Q, apply_mat))
            self._translation_gens.append(i)
        # twisted copies of Q's generators
        for M, q in zip(mats, Q.generators):
            gens.append(self._affine_perm(tuple(0 for _ in range(k)), (M, q),
                                          Q, apply_mat))
        self._apply_mat = apply_mat
        self.mats = mats
        self.group = FiniteGroup(degree, gens)
        expected = na * Q.order
        if self.group.order != expected:
            raise GroupError(
                f"action does not define a semidirect product: closure has "
                f"order {self.group.order}, expected {expected}")

    def _affine_perm(self, shift, twist, Q, apply_mat):
        na = len(self.points)
        out = []
        for p in self.points:
            v = apply_mat(twist[0], p) if twist else p
            w = tuple((v[i] + shift[i]) % self.moduli[i]
                      for i in range(len(self.moduli)))
            out.append(self.point_index[w])
        if twist:
            out.extend(na + twist[1][i] for i in range(Q.degree))
        else:
            out.extend(na + i for i in range(Q.degree))
        return tuple(out)

    # -- structure maps ------------------------------------------------------

    def translation(self, v) -> Perm:
        """The element of the group translating A by v."""
        v = tuple(x % m for x, m in zip(v, self.moduli))
        na = len(self.points)
        out = [self.point_index[
            tuple((p[i] + v[i]) % self.moduli[i] for i in range(len(v)))]
            for p in self.points]
        out.extend(na + i for i in range(self.qgroup.degree))
        return tuple(out)

    def vector_part(self, g: Perm):
        """Translation component of an element: image of the A-origin."""
        return self.points[g[self.point_index[tuple(0 for _ in self.moduli)]]]

    def q_part(self, g: Perm) -> Perm:
        na = len(self.points)
        return tuple(g[na + i] - na for i in range(self.qgroup.degree))

    def translation_subgroup(self) -> Subgroup:
        els = [g for g in self.group.elements
               if self.q_part(g) == self.qgroup.identity
               and self._is_translation(g)]
        return self.group.subgroup(els)

    def _is_translation(self, g: Perm) -> bool:
        v = self.vector_part(g)
        return g == self.translation(v)

    def projection_to_q(self) -> GroupHom:
        imgs = [self.q_part(g) for g in self.group.generators]
        return GroupHom(self.group, self.qgroup, imgs)


def semidirect_product(moduli, Q: FiniteGroup, action) -> FiniteGroup:
    """Semidirect product of an abelian group by Q; order |A| * |Q| verified."""
    return SemidirectGroup(moduli, Q, action).group
