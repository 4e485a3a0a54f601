"""Table of marks, Burnside elements, and resolving functions.

Marks are fixed-point counts m[H][K] = |(G/H)^K| over conjugacy classes of
subgroups.  A resolving function is an integer function on subgroup classes
such that every Weyl index [N_G(H):H] divides phi(H) and, whenever the class
representative is cyclic mod some prime, the sum of phi over all subgroups
containing it vanishes.  The lattice of resolving functions is computed
exactly; r(G) is the nonnegative generator of its possible values at G.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

from .classify import is_cyclic, is_cyclic_mod_p, prime_divisors
from .groups import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    GroupError,
    conjugacy_classes_of_subgroups,
    left_cosets,
)
from .intlinalg import hnf_basis, kernel_basis, solve_combination


class TableOfMarks:
    """Marks matrix over order-sorted subgroup classes (lower triangular)."""

    def __init__(self, group: FiniteGroup, classes, marks: List[List[int]]):
        self.group = group
        self.classes = list(classes)
        self.marks = marks

    @property
    def nclasses(self) -> int:
        return len(self.classes)

    @property
    def full_class_index(self) -> int:
        return self.nclasses - 1

    def weyl_index(self, c: int) -> int:
        return self.marks[c][c]

    def mark(self, h: int, k: int) -> int:
        return self.marks[h][k]

    def class_of_subgroup(self, S) -> int:
        for c in self.classes:
            if any(S.indices == M.indices for M in c.members):
                return c.index
        raise GroupError("subgroup not found among classes")


def marks(G: FiniteGroup, order_cap: int = DEFAULT_ORDER_CAP) -> TableOfMarks:
    """Table of marks m[H][K] = #{gH : g^-1 K g <= H}."""
    classes = conjugacy_classes_of_subgroups(G, order_cap)
    T = G.table()
    inv = G.inverses()
    mat = []
    for ch in classes:
        H = ch.representative
        Hset = H.indices
        cosets = left_cosets(G, H)
        reps = [min(c) for c in cosets]
        row = []
        for ck in classes:
            K = ck.representative.indices
            count = 0
            for g in reps:
                gi = inv[g]
                if all(T[T[gi][k]][g] in Hset for k in K):
                    count += 1
            row.append(count)
        mat.append(row)
    return TableOfMarks(G, classes, mat)


@dataclass
class BurnsideElement:
    """Integer combination of basis G-sets [G/H], indexed by class."""

    tom: TableOfMarks
    coefficients: tuple

    def __post_init__(self):
        if len(self.coefficients) != self.tom.nclasses:
            raise GroupError("coefficient vector length mismatch")
        self.coefficients = tuple(int(c) for c in self.coefficients)

    def mark_vector(self):
        """Fixed-point counts per class: (M^T c)[K] = sum_H c_H m[H][K]."""
        n = self.tom.nclasses
        return tuple(
            sum(self.coefficients[h] * self.tom.marks[h][k] for h in range(n))
            for k in range(n))

    def __add__(self, other: "BurnsideElement") -> "BurnsideElement":
        return BurnsideElement(self.tom, tuple(
            a + b for a, b in zip(self.coefficients, other.coefficients)))

    def product_marks(self, other: "BurnsideElement"):
        """Mark vector of the product, as pointwise product of mark vectors."""
        return tuple(a * b for a, b in
                     zip(self.mark_vector(), other.mark_vector()))


def basis_element(tom: TableOfMarks, class_index: int) -> BurnsideElement:
    coeffs = [0] * tom.nclasses
    coeffs[class_index] = 1
    return BurnsideElement(tom, tuple(coeffs))


def ghost(tom: TableOfMarks, element: BurnsideElement) -> int:
    """Euler characteristic of the full fixed-point set: sum c_H m[H][G]."""
    g = tom.full_class_index
    return sum(element.coefficients[h] * tom.marks[h][g]
               for h in range(tom.nclasses))


def containment_counts(G: FiniteGroup,
                       order_cap: int = DEFAULT_ORDER_CAP):
    """nu[H][K] = number of members of class [K] containing the
    representative of class [H]."""
    classes = conjugacy_classes_of_subgroups(G, order_cap)
    out = []
    for ch in classes:
        H = ch.representative.indices
        row = []
        for ck in classes:
            row.append(sum(1 for M in ck.members if H <= M.indices))
        out.append(row)
    return out


def _cyclic_mod_some_prime(rep, order_cap: int) -> bool:
    HG = rep.as_group()
    if HG.is_cyclic():
        return True
    return any(is_cyclic_mod_p(HG, p, order_cap)
               for p in prime_divisors(HG.order))


@dataclass
class ResolvingFunction:
    """Integer vector phi over subgroup classes."""

    tom: TableOfMarks
    values: tuple

    def value_at_full_group(self) -> int:
        return self.values[self.tom.full_class_index]


def resolving_constraints(G: FiniteGroup, order_cap: int = DEFAULT_ORDER_CAP):
    """(tom, nu, cyclic-ish class indices) shared by the solver and checkers."""
    tom = marks(G, order_cap)
    nu = containment_counts(G, order_cap)
    special = [c.index for c in tom.classes
               if _cyclic_mod_some_prime(c.representative, order_cap)]
    return tom, nu, special


def verify_resolving(tom: TableOfMarks, nu, special, values) -> List[str]:
    """Re-check both resolving-function invariants; returns violations."""
    bad = []
    n = tom.nclasses
    for c in range(n):
        w = tom.weyl_index(c)
        if values[c] % w != 0:
            bad.append(f"Weyl index {w} does not divide phi at class {c}")
    for c in special:
        s = sum(nu[c][k] * values[k] for k in range(n))
        if s != 0:
            bad.append(f"containment sum at cyclic-mod-p class {c} is {s}")
    return bad


def resolving_lattice(G: FiniteGroup, order_cap: int = DEFAULT_ORDER_CAP):
    """Basis (HNF rows) of the lattice of resolving functions of G.

    Substitutes phi = weyl * psi, imposes the containment-sum conditions on
    psi, and maps the integer kernel back to phi coordinates.
    """
    tom, nu, special = resolving_constraints(G, order_cap)
    n = tom.nclasses
    weyl = [tom.weyl_index(c) for c in range(n)]
    rows = [[nu[c][k] * weyl[k] for k in range(n)] for c in special]
    if not rows:
        psi_basis = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    else:
        psi_basis = kernel_basis(rows)
    phi_basis = [[x * weyl[k] for k, x in enumerate(row)] for row in psi_basis]
    basis = hnf_basis(phi_basis) if phi_basis else []
    for row in basis:
        bad = verify_resolving(tom, nu, special, row)
        if bad:
            raise GroupError(f"solver produced an invalid vector: {bad}")
    return tom, basis


def r_invariant(G: FiniteGroup, order_cap: int = DEFAULT_ORDER_CAP) -> int:
    """gcd of the phi(G) coordinate over the resolving lattice (0 if empty)."""
    from math import gcd
    tom, basis = resolving_lattice(G, order_cap)
    col = tom.full_class_index
    g = 0
    for row in basis:
        g = gcd(g, row[col])
    return g


def _min_l1_in_coset(basis: List[List[int]], v0: List[int]):
    """Lexicographically-least minimizer of the l1 norm over v0 + lattice.

    Branch-and-bound over the HNF rows of the lattice; exact and
    deterministic.  basis rows must be in HNF (pivot columns increasing).
    """
    if not basis:
        return list(v0)
    m = len(v0)
    rows = basis
    pivots = [next(j for j in range(m) if row[j]) for row in rows]

    def norm1(v):
        return sum(abs(x) for x in v)

    # greedy size-reduction for an initial bound
    best = list(v0)
    improved = True
    while improved:
        improved = False
        for row in rows:
            for q in (1, -1):
                cand = [x + q * y for x, y in zip(best, row)]
                if norm1(cand) < norm1(best):
                    best = cand
                    improved = True
    best_key = (norm1(best), tuple(best))

    def rec(i, current, fixed_norm):
        nonlocal best, best_key
        if i == len(rows):
            key = (norm1(current), tuple(current))
            if key < best_key:
                best_key = key
                best = list(current)
            return
        p = pivots[i]
        d = rows[i][p]
        # coordinate at pivot p is current[p] + t*d; |...| <= budget
        budget = best_key[0] - fixed_norm
        lo = -((budget + current[p]) // d)
        hi = (budget - current[p]) // d
        for t in range(lo, hi + 1):
            nxt = [x + t * y for x, y in zip(current, rows[i])]
            new_fixed = fixed_norm + abs(nxt[p])
            if new_fixed <= best_key[0]:
                rec(i + 1, nxt, new_fixed)

    rec(0, list(v0), 0)
    return best


def find_unit_resolving(G: FiniteGroup,
                        order_cap: int = DEFAULT_ORDER_CAP
                        ) -> ResolvingFunction:
    """A resolving function with phi(G) = -1, minimizing the l1 norm.

    Only exists when r(G) = 1; raises GroupError otherwise.
    """
    tom, basis = resolving_lattice(G, order_cap)
    col = tom.full_class_index
    coeffs = solve_combination([row[col] for row in basis], -1)
    if coeffs is None:
        raise GroupError("no unit resolving function: r(G) != 1")
    n = tom.nclasses
    v0 = [sum(c * row[j] for c, row in zip(coeffs, basis)) for j in range(n)]
    # sublattice with vanishing phi(G) coordinate
    zero_coeffs = kernel_basis([[row[col] for row in basis]])
    sub = [[sum(c * row[j] for c, row in zip(cs, basis)) for j in range(n)]
           for cs in zero_coeffs]
    sub = hnf_basis(sub) if sub else []
    vec = _min_l1_in_coset(sub, v0)
    assert vec[col] == -1
    _, nu, special = resolving_constraints(G, order_cap)
    bad = verify_resolving(tom, nu, special, vec)
    if bad:
        raise GroupError(f"unit resolving function failed re-check: {bad}")
    return ResolvingFunction(tom, tuple(vec))
