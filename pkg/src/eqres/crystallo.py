"""Finite quotients of split crystallographic data and their subgroup checks.

A split datum is a finite subgroup F of GL_n(Z); the associated lattice group
is Z^n x| F and its finite quotients are (Z/s)^n x| F of order s^n * |F|.
This module builds those quotients as permutation groups with labelled
structure maps, analyses their Dress subgroups, constructs short kernel
homomorphisms by lattice reduction, and runs the order/dichotomy bookkeeping
for semidirect products (Z/s)^n x|_M Z/r.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, isqrt
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import sympy

from .classify import DressResult, is_dress, omega
from .groups import (
    DEFAULT_ORDER_CAP,
    EnumerationIncomplete,
    FiniteGroup,
    GroupError,
    GroupHom,
    SemidirectGroup,
    Subgroup,
    all_subgroups,
    bounded_generator_subgroups,
    cyclic,
)
from .intlinalg import gauss_reduce_2d, hnf_basis, int_det, kernel_basis

DEFAULT_MATRIX_CAP = 10_000
DEFAULT_REPRESENTABILITY_CAP = 5000

Matrix = Tuple[Tuple[int, ...], ...]


def _mat(M) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in M)


def mat_mul_int(A: Matrix, B: Matrix) -> Matrix:
    n = len(A)
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n))
        for i in range(n))


def mat_mod(A: Matrix, s: int) -> Matrix:
    return tuple(tuple(x % s for x in row) for row in A)


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


class CrystalData:
    """A finite matrix group F <= GL_n(Z), the holonomy of Z^n x| F."""

    def __init__(self, n: int, f_gens: Sequence,
                 matrix_cap: int = DEFAULT_MATRIX_CAP):
        self.n = n
        self.f_gens = tuple(_mat(M) for M in f_gens)
        for M in self.f_gens:
            if len(M) != n or any(len(row) != n for row in M):
                raise GroupError("generator matrices must be n x n")
            if int_det(M) not in (1, -1):
                raise GroupError("generator matrices must have determinant "
                                 "+-1")
        e = identity_matrix(n)
        els = {e}
        frontier = [e]
        while frontier:
            new = []
            for A in frontier:
                for M in self.f_gens:
                    B = mat_mul_int(A, M)
                    if B not in els:
                        els.add(B)
                        new.append(B)
                        if len(els) > matrix_cap:
                            raise EnumerationIncomplete(
                                f"matrix group exceeds cap {matrix_cap}")
            frontier = new
        self.matrices = tuple(sorted(els))
        self._mat_index = {M: i for i, M in enumerate(self.matrices)}
        # left regular permutation representation of F
        gen_perms = [
            tuple(self._mat_index[mat_mul_int(M, N)] for N in self.matrices)
            for M in self.f_gens
        ]
        self.f_group = FiniteGroup(len(self.matrices), gen_perms)

    @property
    def holonomy_order(self) -> int:
        return len(self.matrices)

    def matrix_of_f_element(self, g) -> Matrix:
        """The matrix corresponding to an element of the regular rep."""
        # g sends the identity's index to the index of its own matrix
        return self.matrices[g[self._mat_index[identity_matrix(self.n)]]]


@dataclass
class QuotientBundle:
    """(Z/s)^n x| F as a permutation group with labelled structure maps."""

    data: CrystalData
    s: int
    sd: SemidirectGroup
    pr: GroupHom                  # onto the regular rep of F

    @property
    def group(self) -> FiniteGroup:
        return self.sd.group

    def translation(self, v) -> tuple:
        return self.sd.translation(v)

    def vector_of(self, g) -> tuple:
        return self.sd.vector_part(g)

    def is_translation(self, g) -> bool:
        return self.pr(g) == self.pr.target.identity

    def translation_subgroup(self) -> Subgroup:
        return self.pr.kernel()

    def project_to(self, t: int) -> Tuple["QuotientBundle", GroupHom]:
        """The divisor projection onto the quotient modulo t, for t | s."""
        if t < 1 or self.s % t != 0:
            raise GroupError("target modulus must divide s")
        target = quotient_bundle(self.data, t)
        n = self.data.n
        imgs = []
        k = 0
        for i in range(n):
            if self.sd.moduli[i] > 1:
                e_i = tuple(1 if j == i else 0 for j in range(n))
                imgs.append(target.sd.translation(e_i))
                k += 1
        for j in range(len(self.data.f_gens)):
            imgs.append(target.group.generators[
                len(target.sd._translation_gens) + j])
        hom = GroupHom(self.group, target.group, imgs)
        return target, hom


def quotient_bundle(data: CrystalData, s: int,
                    cap: int = DEFAULT_REPRESENTABILITY_CAP) -> QuotientBundle:
    """The finite quotient (Z/s)^n x| F; order s^n * |F| is verified."""
    if s < 1:
        raise GroupError("modulus must be positive")
    expected = s ** data.n * data.holonomy_order
    if expected > cap:
        raise EnumerationIncomplete(
            f"|quotient| = {expected} exceeds representability cap {cap}")
    action = [mat_mod(M, s) for M in data.f_gens]
    sd = SemidirectGroup((s,) * data.n, data.f_group, action)
    bundle = QuotientBundle(data, s, sd, sd.projection_to_q())
    assert bundle.group.order == expected
    return bundle


@dataclass
class DressSurjectingReport:
    subgroups: List[Tuple[Subgroup, DressResult]]
    complete: bool


def dress_subgroups_surjecting(bundle: QuotientBundle,
                               order_cap: int = DEFAULT_ORDER_CAP,
                               allow_heuristic: bool = False
                               ) -> DressSurjectingReport:
    """Dress subgroups D with pr_s(D) = F, each with its witness.

    When exhaustive enumeration is impossible and allow_heuristic is set, the
    bounded-generator search is used and the report is flagged incomplete.
    """
    complete = True
    try:
        subs = all_subgroups(bundle.group, order_cap)
    except EnumerationIncomplete:
        if not allow_heuristic:
            raise
        subs = bounded_generator_subgroups(bundle.group)
        complete = False
    fmap = bundle.pr.element_map
    forder = bundle.pr.target.order
    out = []
    for D in subs:
        image = {fmap[g] for g in D.elements}
        if len(image) != forder:
            continue
        res = is_dress(D.as_group(), order_cap)
        if res.verdict:
            out.append((D, res))
        elif res.verdict is None:
            complete = False
    return DressSurjectingReport(out, complete)


@dataclass
class InvariantCyclicResult:
    holds: bool
    generator: Optional[tuple]    # vector generating the invariant subgroup
    modulus: int


def invariant_cyclic_check(bundle: QuotientBundle, D: Subgroup,
                           target_modulus: int) -> InvariantCyclicResult:
    """Does the image of D in the quotient modulo target_modulus meet the
    translation lattice in a nontrivial F-invariant cyclic subgroup?

    Preconditions: pr_s(D) = F and D meets the translations nontrivially.
    """
    fmap = bundle.pr.element_map
    if len({fmap[g] for g in D.elements}) != bundle.pr.target.order:
        raise GroupError("subgroup does not surject onto the holonomy group")
    dvectors = [bundle.vector_of(g) for g in D.elements
                if bundle.is_translation(g)]
    if len(dvectors) <= 1:
        raise GroupError("subgroup meets the translations trivially")
    target, hom = bundle.project_to(target_modulus)
    image_translations = sorted({
        target.vector_of(hom(g)) for g in D.elements
        if target.is_translation(hom(g))})
    m = target_modulus
    mats = [mat_mod(M, m) for M in bundle.data.f_gens]
    n = bundle.data.n

    def apply(M, v):
        return tuple(sum(M[i][j] * v[j] for j in range(n)) % m
                     for i in range(n))

    for v in image_translations:
        if all(x == 0 for x in v):
            continue
        cyc = set()
        w = tuple(0 for _ in range(n))
        while True:
            w = tuple((a + b) % m for a, b in zip(w, v))
            cyc.add(w)
            if all(x == 0 for x in w):
                break
        if all(apply(M, v) in cyc for M in mats):
            return InvariantCyclicResult(True, v, m)
    return InvariantCyclicResult(False, None, m)


# ---------------------------------------------------------------------------
# invariant splittings of the rank-2 lattice


def invariant_splitting(data: CrystalData):
    """Two F-invariant rank-1 sublattices spanning Z^2, or None.

    An invariant line must be sent to +-itself by every generator, so the
    search runs over sign patterns; the pair must be unimodular.
    """
    if data.n != 2:
        raise GroupError("invariant_splitting requires rank 2")
    gens = data.f_gens
    if not gens:
        return ((1, 0), (0, 1))
    lines = set()
    for pattern in product((1, -1), repeat=len(gens)):
        rows = []
        for M, e in zip(gens, pattern):
            rows.append([M[0][0] - e, M[0][1]])
            rows.append([M[1][0], M[1][1] - e])
        ker = kernel_basis(rows)
        if len(ker) == 2:
            return ((1, 0), (0, 1))
        if len(ker) == 1:
            v = ker[0]
            g = gcd(v[0], v[1])
            v = (v[0] // g, v[1] // g)
            if v[0] < 0 or (v[0] == 0 and v[1] < 0):
                v = (-v[0], -v[1])
            lines.add(v)
    pairs = [
        (a, b) for a in sorted(lines) for b in sorted(lines)
        if a < b and abs(a[0] * b[1] - a[1] * b[0]) == 1
    ]
    if not pairs:
        return None
    return min(pairs)


def kernel_hom(p: int, c: Sequence[int]) -> Tuple[int, int]:
    """A primitive linear form r on Z^2 whose mod-p kernel is the cyclic
    subgroup generated by c, with Euclidean norm at most sqrt(2p).

    Found as the shortest vector of the dual lattice by Gauss reduction.
    """
    if not sympy.isprime(p):
        raise GroupError("modulus must be prime")
    c = (int(c[0]) % p, int(c[1]) % p)
    if c == (0, 0):
        raise GroupError("subgroup generator must be nonzero mod p")
    rows = [[p, 0], [0, p], [c[1] % p, (-c[0]) % p]]
    basis = hnf_basis(rows)
    v, _ = gauss_reduce_2d(basis[0], basis[1])
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = (-v[0], -v[1])
    # certified properties
    if gcd(v[0], v[1]) != 1:
        raise GroupError("reduction produced an imprimitive form")
    if v[0] * v[0] + v[1] * v[1] > 2 * p:
        raise GroupError("norm bound sqrt(2p) violated")
    kernel = {(x, y) for x in range(p) for y in range(p)
              if (v[0] * x + v[1] * y) % p == 0}
    cyc = {((k * c[0]) % p, (k * c[1]) % p) for k in range(p)}
    if kernel != cyc:
        raise GroupError("kernel does not match the given subgroup")
    return v


# ---------------------------------------------------------------------------
# GL_n(Z/s) orders and prime searches


def O_poly(n: int, x: int) -> int:
    """Order of GL_n over the field with x elements when x is prime:
    product of (x^n - x^j) for j < n."""
    out = 1
    for j in range(n):
        out *= x ** n - x ** j
    return out


def gl_order(n: int, s: int) -> int:
    """|GL_n(Z/s)| for squarefree s, via the prime factor product."""
    if s < 1:
        raise GroupError("modulus must be positive")
    fac = sympy.factorint(s)
    if any(e > 1 for e in fac.values()):
        raise GroupError("gl_order requires a squarefree modulus")
    out = 1
    for p in fac:
        out *= O_poly(n, p)
    return out


def brute_force_gl_order(n: int, s: int) -> int:
    """Count invertible n x n matrices over Z/s directly (test oracle)."""
    units = {x for x in range(s) if gcd(x, s) == 1}
    count = 0
    for entries in product(range(s), repeat=n * n):
        M = [list(entries[i * n:(i + 1) * n]) for i in range(n)]
        if int_det(M) % s in units:
            count += 1
    return count


@dataclass
class PrimeSearchResult:
    primes: List[int]
    complete: bool
    search_limit: int


def prime_search(f: Callable[[int], int], rho: int, mu: int, K: int,
                 count: int, search_limit: int = 1_000_000
                 ) -> PrimeSearchResult:
    """First `count` primes p = rho mod mu with omega(f(p)) <= K.

    Existence is guaranteed for suitable inputs but not location, so the
    search stops at search_limit and flags incompleteness.
    """
    rho_mod = rho % mu
    if gcd(rho_mod, mu) != 1:
        raise GroupError("rho and mu must be coprime")
    found = []
    for p in sympy.primerange(2, search_limit):
        if p % mu != rho_mod:
            continue
        v = f(p)
        if v == 0:
            continue
        if omega(abs(v)) <= K:
            found.append(p)
            if len(found) >= count:
                return PrimeSearchResult(found, True, search_limit)
    return PrimeSearchResult(found, False, search_limit)


# ---------------------------------------------------------------------------
# the dichotomy checker for (Z/s)^n x|_M Z/r


def matrix_order_mod(M: Matrix, s: int, cap: int = 10_000) -> int:
    e = identity_matrix(len(M))
    A = mat_mod(M, s)
    if s == 1:
        return 1
    k = 1
    B = A
    while B != mat_mod(e, s):
        B = mat_mod(mat_mul_int(B, A), s)
        k += 1
        if k > cap:
            raise GroupError("matrix order exceeds cap")
    return k


@dataclass
class DichotomyEntry:
    subgroup: Subgroup
    translations: List[tuple]
    holds_intersection: bool          # (3a) with its witness divisor
    divisor_witness: Optional[int]
    holds_index: bool                 # (3b)
    projection_index: int

    @property
    def neither(self) -> bool:
        return not (self.holds_intersection or self.holds_index)


@dataclass
class DichotomyReport:
    s: int
    r: int
    nu: int
    o: int
    group_order: int
    entries: List[DichotomyEntry] = field(default_factory=list)

    @property
    def all_covered(self) -> bool:
        return all(not e.neither for e in self.entries)


def dichotomy_check(n: int, M, s: int, r: int, nu: int, o: int,
                    cap: int = DEFAULT_REPRESENTABILITY_CAP,
                    order_cap: int = DEFAULT_ORDER_CAP) -> DichotomyReport:
    """For each Dress subgroup of (Z/s)^n x|_M Z/r, test whether its
    translation part is squeezed into nu'(Z/s)^n for an admissible divisor
    nu', or its projection to Z/r has index at least nu.

    This is a verifier: for moduli not coming from the intended prime
    selection, entries may satisfy neither branch and are reported as such.
    """
    M = _mat(M)
    ordM = matrix_order_mod(M, s)
    if r % ordM != 0:
        raise GroupError(f"order of M mod s is {ordM}, which does not "
                         f"divide r = {r}")
    size = s ** n * r
    if size > cap:
        raise EnumerationIncomplete(
            f"group order {size} exceeds representability cap {cap}")
    sd = SemidirectGroup((s,) * n, cyclic(r), [mat_mod(M, s)])
    G = sd.group
    report = DichotomyReport(s, r, nu, o, G.order)
    pr = sd.projection_to_q()
    fmap = pr.element_map
    admissible = [d for d in range(1, s + 1)
                  if s % d == 0 and d >= nu and d % o == 1 % o]
    for D in all_subgroups(G, order_cap):
        if not is_dress(D.as_group(), order_cap).verdict:
            continue
        tvecs = [sd.vector_part(g) for g in D.elements
                 if fmap[g] == pr.target.identity]
        image_order = len({fmap[g] for g in D.elements})
        index = r // image_order
        witness = None
        for d in admissible:
            if all(all(x % d == 0 for x in v) for v in tvecs):
                witness = d
                break
        report.entries.append(DichotomyEntry(
            D, sorted(tvecs), witness is not None, witness,
            index >= nu, index))
    return report


# ---------------------------------------------------------------------------
# prime-selection recipes (thresholds computed exactly; the metric-control
# conclusions they feed are not asserted here)


@dataclass
class PrimeSelection:
    primes: List[int]
    s: int
    r: Optional[int]
    threshold: Fraction
    congruence: Optional[Tuple[int, int]]   # (rho, mu) when constrained


def _odd_primes_at_least(bound: Fraction, count: int,
                         congruence: Optional[Tuple[int, int]] = None,
                         forbidden: Sequence[int] = ()) -> List[int]:
    out = []
    p = 2
    while len(out) < count:
        p = sympy.nextprime(p)
        if Fraction(p) < bound:
            continue
        if congruence is not None:
            rho, mu = congruence
            if p % mu != rho % mu:
                continue
        if p in forbidden:
            continue
        out.append(p)
    return out


def select_primes_rank2_flip(C1, C2, eps) -> PrimeSelection:
    """Three distinct odd primes p >= 8(C1+C2)^2/eps^2; s is their product."""
    bound = 8 * (Fraction(C1) + Fraction(C2)) ** 2 / Fraction(eps) ** 2
    ps = _odd_primes_at_least(bound, 3)
    return PrimeSelection(ps, ps[0] * ps[1] * ps[2], None, bound, None)


def select_primes_normal_cyclic(C1, C2, eps) -> PrimeSelection:
    """Two odd primes p >= 2(C1+C2)/eps; s is their product."""
    bound = 2 * (Fraction(C1) + Fraction(C2)) / Fraction(eps)
    ps = _odd_primes_at_least(bound, 2)
    return PrimeSelection(ps, ps[0] * ps[1], None, bound, None)


def select_primes_no_normal_cyclic(C1, C2, delta, f_order: int
                                   ) -> PrimeSelection:
    """Two primes p = -1 mod 4l (odd part l of |F|), p >= (C1+C2)/delta and
    p >= |F|; returns s = (p1 p2)^r with r the Euler totient of |F|."""
    l = f_order
    while l % 2 == 0:
        l //= 2
    bound = max(Fraction(C1 + C2) / Fraction(delta), Fraction(f_order))
    ps = _odd_primes_at_least(bound, 2, congruence=(-1 % (4 * l), 4 * l))
    r = int(sympy.totient(f_order))
    return PrimeSelection(ps, (ps[0] * ps[1]) ** r, r, bound,
                          (-1 % (4 * l), 4 * l))
