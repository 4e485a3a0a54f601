"""Group-class predicates: p-groups, cyclic-mod-p, the Dress family, depth.

A finite group lies in the Dress family when it admits a normal series
P <| H <| G with P a p-group, H/P cyclic and G/H a q-group for primes p, q
(either end may be trivial).  Witnesses can be normalized so that P is normal
in the whole group and |H/P| is coprime to p and q.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import sympy

from .groups import (
    DEFAULT_ORDER_CAP,
    EnumerationIncomplete,
    FiniteGroup,
    GroupError,
    Subgroup,
    all_subgroups,
    is_normal,
    perm_order,
    quotient,
)


def _as_group(G) -> FiniteGroup:
    return G.as_group() if isinstance(G, Subgroup) else G


def omega(n: int) -> int:
    """Number of prime factors of n counted with multiplicity."""
    if n < 1:
        raise ValueError("omega is defined for positive integers")
    return sum(sympy.factorint(n).values())


def bd(d: int) -> int:
    """Dimension bound 4*d + 2 for a fixed-point-free contractible complex."""
    if d < 1:
        raise ValueError("depth must be positive")
    return 4 * d + 2


def cor27_bound(d: int) -> int:
    """Iterated-resolution dimension bound: sum over nonempty subsets M of
    {1..d} of the product of bd(m) for m in M."""
    if d < 1:
        raise ValueError("depth must be positive")
    total = 1
    for m in range(1, d + 1):
        total *= 1 + bd(m)
    return total - 1


def prime_divisors(n: int):
    return sorted(sympy.factorint(n).keys())


def is_prime_power(n: int) -> Optional[int]:
    """The prime p when n = p^k with k >= 1, else None (n = 1 gives None)."""
    if n <= 1:
        return None
    f = sympy.factorint(n)
    return next(iter(f)) if len(f) == 1 else None


def is_p_group(H, p: int) -> bool:
    """True when |H| is a power of p (the trivial group counts for every p)."""
    n = _as_group(H).order if not isinstance(H, Subgroup) else H.order
    while n % p == 0:
        n //= p
    return n == 1


def is_cyclic(H) -> bool:
    G = _as_group(H)
    return G.is_cyclic()


@dataclass(frozen=True)
class CycModPWitness:
    p: int
    kernel: Subgroup          # normal p-subgroup P of H
    quotient_order: int       # order of the cyclic quotient H/P


def cyclic_mod_p_witness(H, p: int,
                         order_cap: int = DEFAULT_ORDER_CAP
                         ) -> Optional[CycModPWitness]:
    """A normal p-subgroup P <| H with H/P cyclic, or None.

    Searches P by decreasing order, so the returned quotient is as small as
    possible; deterministic for a fixed group.
    """
    G = _as_group(H)
    candidates = [S for S in all_subgroups(G, order_cap) if is_p_group(S, p)]
    candidates.sort(key=lambda S: (-S.order, S.key))
    for P in candidates:
        if not is_normal(G, P):
            continue
        Q, _ = quotient(G, P)
        if Q.is_cyclic():
            return CycModPWitness(p, P, Q.order)
    return None


def is_cyclic_mod_p(H, p: int, order_cap: int = DEFAULT_ORDER_CAP) -> bool:
    return cyclic_mod_p_witness(H, p, order_cap) is not None


@dataclass(frozen=True)
class DressWitness:
    """Normal series P <| H <| G certifying Dress-family membership."""

    p: int
    q: int
    P: Subgroup
    H: Subgroup
    normalized: bool = False

    def series_orders(self):
        return (self.P.order, self.H.order)


@dataclass(frozen=True)
class DressResult:
    verdict: Optional[bool]     # None = unknown (enumeration incomplete)
    witness: Optional[DressWitness]
    reason: str = ""


def _dress_witness_for(G: FiniteGroup, order_cap: int):
    subs = all_subgroups(G, order_cap)
    normal_subs = [H for H in subs if is_normal(G, H)]
    # prefer larger H so that the q-quotient is small
    normal_subs.sort(key=lambda S: (-S.order, S.key))
    for H in normal_subs:
        index = G.order // H.order
        q = is_prime_power(index)
        if index != 1 and q is None:
            continue
        HG = H.as_group()
        if HG.is_cyclic():
            return DressWitness(p=2, q=q or 2, P=G.subgroup([G.identity]),
                                H=H)
        for p in prime_divisors(H.order):
            w = cyclic_mod_p_witness(HG, p, order_cap)
            if w is not None:
                P = G.subgroup(w.kernel.elements)
                return DressWitness(p=p, q=q or 2, P=P, H=H)
    return None


def is_dress(G, order_cap: int = DEFAULT_ORDER_CAP) -> DressResult:
    """Exhaustive Dress-family test with witness.

    Enumeration failures surface as verdict None, never as a silent False.
    """
    G = _as_group(G)
    try:
        w = _dress_witness_for(G, order_cap)
    except EnumerationIncomplete as exc:
        return DressResult(None, None, str(exc))
    if w is None:
        return DressResult(False, None)
    return DressResult(True, w)


def _sylow_part_of_cyclic(Q: FiniteGroup, p: int) -> Subgroup:
    """The unique p-Sylow subgroup of a cyclic group."""
    n = Q.order
    pk = 1
    while n % p == 0:
        n //= p
        pk *= p
    els = [g for g in Q.elements if pk % perm_order(g) == 0]
    return Q.subgroup(els)


def dress_normalize(G, witness: DressWitness,
                    order_cap: int = DEFAULT_ORDER_CAP) -> DressWitness:
    """Normalize a Dress witness in two projection steps.

    First absorb the p-part of the cyclic quotient H/P into P, then shrink H
    so that the q-part of the quotient moves into Q = G/H.  The result has
    P normal in G and |H/P| coprime to p*q.
    """
    G = _as_group(G)
    p, q = witness.p, witness.q
    P0, H0 = witness.P, witness.H
    if not (P0.indices <= H0.indices):
        raise GroupError("invalid witness: P is not contained in H")
    Hgroup = H0.as_group()
    P_in_H = Hgroup.subgroup(P0.elements)
    if not is_p_group(P_in_H, p) or not is_normal(Hgroup, P_in_H):
        raise GroupError("invalid witness: P is not a normal p-subgroup of H")

    # step 1: pull back the p-Sylow of the cyclic quotient H/P
    Q1, pi1 = quotient(Hgroup, P_in_H)
    if not Q1.is_cyclic():
        raise GroupError("invalid witness: H/P is not cyclic")
    Sp = _sylow_part_of_cyclic(Q1, p)
    P_new = pi1.preimage_of_subgroup(Sp)

    if p == q:
        H_new = H0
    else:
        # step 2: strip the q-part of the remaining cyclic quotient
        Q2, pi2 = quotient(Hgroup, P_new)
        Sq = _sylow_part_of_cyclic(Q2, q)
        qk = Sq.order
        coprime_part = Q2.subgroup(
            [g for g in Q2.elements if (Q2.order // qk) % perm_order(g) == 0])
        H_new = G.subgroup(pi2.preimage_of_subgroup(coprime_part).elements)
    P_new = G.subgroup(P_new.elements)

    out = DressWitness(p=p, q=q, P=P_new, H=H_new, normalized=True)
    check_dress_witness(G, out, require_normalized=True)
    return out


def check_dress_witness(G, w: DressWitness,
                        require_normalized: bool = False) -> None:
    """Assert the witness invariants; raises GroupError on violation."""
    G = _as_group(G)
    if not (w.P.indices <= w.H.indices):
        raise GroupError("P not contained in H")
    if not is_p_group(w.P, w.p):
        raise GroupError("P is not a p-group")
    Hgroup = w.H.as_group()
    P_in_H = Hgroup.subgroup(w.P.elements)
    if not is_normal(Hgroup, P_in_H):
        raise GroupError("P is not normal in H")
    if not is_normal(G, w.H):
        raise GroupError("H is not normal in G")
    Q1, _ = quotient(Hgroup, P_in_H)
    if not Q1.is_cyclic():
        raise GroupError("H/P is not cyclic")
    index = G.order // w.H.order
    n = index
    while n % w.q == 0:
        n //= w.q
    if n != 1:
        raise GroupError("G/H is not a q-group")
    if require_normalized:
        if not is_normal(G, w.P):
            raise GroupError("normalized witness must have P normal in G")
        hp = Q1.order
        if hp % w.p == 0 or hp % w.q == 0:
            raise GroupError("|H/P| must be coprime to p and q")


@dataclass(frozen=True)
class DepthReport:
    depth: int
    chain: tuple          # subgroups, largest first
    omega_bound: int


def depth(G, order_cap: int = DEFAULT_ORDER_CAP) -> DepthReport:
    """Longest strictly descending subgroup chain, counted by its length.

    The whole group and the trivial subgroup are admissible chain members, so
    e.g. S3 > C3 > 1 has depth 3.
    """
    G = _as_group(G)
    subs = all_subgroups(G, order_cap)   # sorted by order ascending
    down = {}
    best_next = {}
    for S in subs:
        cands = [T for T in subs if T.order < S.order and T.indices < S.indices]
        if not cands:
            down[S.indices] = 1
            best_next[S.indices] = None
        else:
            best = max(cands, key=lambda T: (down[T.indices], T.order, T.key))
            down[S.indices] = 1 + down[best.indices]
            best_next[S.indices] = best
    top = subs[-1]
    chain = [top]
    while best_next[chain[-1].indices] is not None:
        chain.append(best_next[chain[-1].indices])
    return DepthReport(down[top.indices], tuple(chain), omega(G.order))
