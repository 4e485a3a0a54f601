import pytest

from eqres.burnside import ResolvingFunction, find_unit_resolving, marks
from eqres.classify import depth
from eqres.complexes import GComplex, fixed_subcomplex, join
from eqres.groups import (
    GroupError,
    alternating,
    cyclic,
    symmetric,
)
from eqres.oliver import (
    JoinReport,
    VirtualGCW,
    build_Y,
    chi_fixed,
    complete_and_join,
    rank_order,
)


def test_rank_order_s3():
    rk = rank_order(symmetric(3))
    assert [c.order for c in rk.classes] == [1, 2, 3, 6]
    assert rk.rank == (3, 2, 2, 1)
    assert rk.order == (3, 1, 2, 0)


def test_rank_order_c4():
    rk = rank_order(cyclic(4))
    assert rk.rank == (3, 2, 1)


def test_rank_order_trivial_group():
    rk = rank_order(cyclic(1))
    assert rk.rank == (1,)


def test_rank_matches_depth():
    for G in (symmetric(3), symmetric(4), alternating(5), cyclic(12)):
        rk = rank_order(G)
        assert rk.rank[-1] == 1                        # class of G itself
        assert rk.rank[0] == depth(G).depth            # trivial class


def test_chi_fixed_single_cell():
    G = symmetric(3)
    tom = marks(G)
    rk = rank_order(G)
    W = VirtualGCW(G, tom, rk)
    W.add_cells(1, 0, 1)     # one orbit of C2-cosets in dimension 0
    for k in range(tom.nclasses):
        assert chi_fixed(W, k) == tom.marks[1][k]


def test_chi_fixed_empty():
    G = symmetric(3)
    W = VirtualGCW(G, marks(G), rank_order(G))
    assert all(chi_fixed(W, k) == 0 for k in range(4))


def test_chi_fixed_matches_actual_complex():
    # free C2-complex: two vertex orbits and one edge orbit
    G = cyclic(2)
    X = GComplex(G, 4,
                 [frozenset([0]), frozenset([1]), frozenset([2]),
                  frozenset([3]), frozenset([0, 2]), frozenset([1, 3])],
                 [(1, 0, 3, 2)])
    tom = marks(G)
    rk = rank_order(G)
    W = VirtualGCW(G, tom, rk)
    W.add_cells(0, 0, 2)   # two free vertex orbits
    W.add_cells(0, 1, 1)   # one free edge orbit
    from eqres.groups import all_subgroups
    for c in tom.classes:
        F = fixed_subcomplex(X, c.representative)
        assert chi_fixed(W, c.index) == F.euler_char()


def test_build_y_a5():
    G = alternating(5)
    phi = find_unit_resolving(G)
    W = build_Y(G, phi)
    tom = W.tom
    # no G/G cells, all dims <= 1, chi conditions verified inside build_Y
    assert all(c != tom.full_class_index for (c, d) in W.cells)
    assert all(d <= 2 * W.ranked.rank[c] for (c, d) in W.cells)
    assert W.max_dim() <= 2 * depth(G).depth - 2
    # classes V4 and C5 need no cells (their deficit closes at zero)
    class_orders = {c.index: c.order for c in tom.classes}
    used = {c for (c, d) in W.cells}
    assert all(class_orders[c] not in (4, 5) for c in used)
    # p-group classes carry acyclicity obligations
    ob_classes = {o.class_index for o in W.obligations if o.kind == "acyclicity"}
    expected = {c.index for c in tom.classes
                if c.order in (2, 3, 4, 5)}
    assert ob_classes == expected


def test_build_y_rejects_wrong_value_at_g():
    G = alternating(5)
    phi = find_unit_resolving(G)
    doubled = ResolvingFunction(phi.tom, tuple(2 * v for v in phi.values))
    with pytest.raises(GroupError):
        build_Y(G, doubled)


def test_build_y_rejects_invalid_phi():
    G = alternating(5)
    phi = find_unit_resolving(G)
    tampered = list(phi.values)
    tampered[1] += 1     # breaks Weyl divisibility
    with pytest.raises(GroupError):
        build_Y(G, ResolvingFunction(phi.tom, tuple(tampered)))


def test_complete_and_join_a5():
    G = alternating(5)
    rep = complete_and_join(build_Y(G, find_unit_resolving(G)), G)
    assert not rep.vacuous
    assert rep.depth == 5
    assert rep.final_bound == 22
    assert rep.final_dim <= 22
    assert rep.bound_satisfied
    # join chi from the formula 2c - c^2
    for c, v in rep.chi_fixed_y0.items():
        assert rep.chi_fixed_join[c] == 2 * v - v * v
    kinds = {o.kind for o in rep.obligations}
    assert "connectivity" in kinds and "stable-freeness" in kinds


def test_complete_and_join_vacuous():
    G = symmetric(3)
    W = VirtualGCW(G, marks(G), rank_order(G))
    rep = complete_and_join(W, G)
    assert rep.vacuous
    assert any(o.kind == "vacuous" for o in rep.obligations)


def test_join_chi_formula_against_actual_complex():
    # the chi bookkeeping for joins agrees with an honest join of complexes
    G = cyclic(2)
    Y = GComplex(G, 4,
                 [frozenset([0]), frozenset([1]), frozenset([2]),
                  frozenset([3]), frozenset([0, 2]), frozenset([1, 3])],
                 [(1, 0, 3, 2)])
    J = join(Y, Y)
    from eqres.groups import all_subgroups
    for S in all_subgroups(G):
        cy = fixed_subcomplex(Y, S).euler_char()
        cj = fixed_subcomplex(J, S).euler_char()
        assert cj == 2 * cy - cy * cy


def test_build_y_s5():
    G = symmetric(5)
    W = build_Y(G, find_unit_resolving(G))
    rep = complete_and_join(W, G)
    assert rep.bound_satisfied
    assert rep.final_bound == 4 * depth(G).depth + 2
