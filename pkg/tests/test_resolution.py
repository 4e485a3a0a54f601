import random
from fractions import Fraction

import pytest

from eqres.complexes import (
    GComplex,
    cone,
    full_simplex,
    homology,
    l1_distance,
    point_complex,
    trivial_group,
    validate,
)
from eqres.groups import GroupError, alternating, cyclic, symmetric
from eqres.resolution import (
    AltPoint,
    canonical_projection,
    check_partition_identity,
    d1_bound_check,
    d1_metric,
    from_alt,
    induced_map,
    point_resolution_data,
    recursive_resolution,
    resolution_data,
    resolve,
    to_alt,
    transport_elements,
    vertex_stabilizers_occur_in_fibers,
)


def edge_complex():
    return full_simplex(1)


def delta1_fiber():
    return full_simplex(1)


def test_delta1_by_delta1_is_delta3():
    X = edge_complex()
    data = resolution_data(X, {0: delta1_fiber(), 1: delta1_fiber()})
    res = resolve(data)
    Y = res.complex
    assert Y.nverts == 4
    assert Y.dim == 3  # attains nk + n + k = 1*1 + 1 + 1
    assert len(Y.simplices) == 15  # full simplex on 4 vertices
    h = homology(Y, reduced=True)
    assert h.is_trivial()


def test_point_fibers_give_back_base():
    G = symmetric(3)
    base = GComplex(G, 3, [frozenset([v]) for v in range(3)],
                    list(G.generators))
    X = cone(base)
    res = resolve(point_resolution_data(X))
    assert res.complex.nverts == X.nverts
    assert res.complex.simplices == X.simplices


def rotating_circle():
    """Boundary of the triangle with the rotation action of C3."""
    G = cyclic(3)
    sims = [frozenset([0]), frozenset([1]), frozenset([2]),
            frozenset([0, 1]), frozenset([1, 2]), frozenset([0, 2])]
    return GComplex(G, 3, sims, [(1, 2, 0)])


def test_circle_with_edge_fibers_is_circle():
    X = rotating_circle()
    stab = X.vertex_stabilizer(0).as_group()   # trivial
    fiber = GComplex(stab, 2,
                     [frozenset([0]), frozenset([1]), frozenset([0, 1])], [])
    res = resolve(resolution_data(X, {0: fiber}))
    assert res.complex.nverts == 6
    h = homology(res.complex)
    assert h.betti(0) == 1 and h.betti(1) == 1
    assert not h.torsion(1)


def test_transport_elements():
    X = rotating_circle()
    t = transport_elements(X, 0)
    perms = X.element_perms()
    assert set(t) == {0, 1, 2}
    for v, g in t.items():
        assert perms[g][0] == v


def test_resolution_dim_bound_random():
    rng = random.Random(99)
    for _ in range(25):
        nv = rng.randint(1, 4)
        X = GComplex(trivial_group(), nv,
                     [frozenset(rng.sample(range(nv), rng.randint(1, min(3, nv))))
                      for _ in range(rng.randint(1, 3))], [], close_faces=True)
        fibers = {}
        for orbit in X.vertex_orbits():
            k = rng.randint(1, 3)
            fibers[orbit[0]] = full_simplex(k - 1)
        data = resolution_data(X, fibers)
        res = resolve(data)
        n = X.dim
        k = max(o.fiber.dim for o in data.orbits)
        assert res.complex.dim <= n * k + n + k
        check_partition_identity(res)


def test_stabilizers_occur_in_fibers():
    X = rotating_circle()
    fiber = GComplex(X.vertex_stabilizer(0).as_group(), 2,
                     [frozenset([0]), frozenset([1]), frozenset([0, 1])], [])
    res = resolve(resolution_data(X, {0: fiber}))
    assert vertex_stabilizers_occur_in_fibers(res)


def test_resolution_data_validation():
    X = rotating_circle()
    wrong_group_fiber = point_complex(cyclic(2))
    with pytest.raises(GroupError):
        resolve(resolution_data(X, {0: wrong_group_fiber}))


def test_alt_roundtrip_exact():
    X = edge_complex()
    data = resolution_data(X, {0: delta1_fiber(), 1: delta1_fiber()})
    res = resolve(data)
    rng = random.Random(4)
    sims = sorted(res.complex.simplices, key=lambda s: (len(s), sorted(s)))
    for _ in range(200):
        s = sorted(rng.choice(sims))
        raw = [rng.randint(1, 8) for _ in s]
        tot = sum(raw)
        pt = {v: Fraction(r, tot) for v, r in zip(s, raw)}
        alt = to_alt(res, pt)
        back = from_alt(res, alt)
        assert back == pt
        assert to_alt(res, back) == alt


def test_alt_vertex_point():
    X = edge_complex()
    res = resolve(resolution_data(X, {0: delta1_fiber(), 1: delta1_fiber()}))
    pt = {res.global_vertex(0, 1): Fraction(1)}
    alt = to_alt(res, pt)
    assert alt.lambdas() == {0: Fraction(1)}
    assert alt.eta(0) == {res.global_vertex(0, 1): Fraction(1)}


def test_alt_uniform_on_delta3():
    X = edge_complex()
    res = resolve(resolution_data(X, {0: delta1_fiber(), 1: delta1_fiber()}))
    pt = {y: Fraction(1, 4) for y in range(4)}
    alt = to_alt(res, pt)
    assert alt.lambdas() == {0: Fraction(1, 2), 1: Fraction(1, 2)}
    for x in (0, 1):
        eta = alt.eta(x)
        assert set(eta.values()) == {Fraction(1, 2)}


def test_d1_metric_and_bound():
    X = edge_complex()
    res = resolve(resolution_data(X, {0: delta1_fiber(), 1: delta1_fiber()}))
    rng = random.Random(12)
    sims = sorted(res.complex.simplices, key=lambda s: (len(s), sorted(s)))

    def rand_alt():
        s = sorted(rng.choice(sims))
        raw = [rng.randint(1, 9) for _ in s]
        tot = sum(raw)
        return to_alt(res, {v: Fraction(r, tot) for v, r in zip(s, raw)})

    for _ in range(300):
        a, b = rand_alt(), rand_alt()
        assert d1_metric(res, a, a) == 0
        lhs, rhs, ok = d1_bound_check(res, a, b)
        assert ok and lhs <= rhs


def test_d1_single_fiber_tight():
    X = edge_complex()
    res = resolve(resolution_data(X, {0: delta1_fiber(), 1: delta1_fiber()}))
    v0, v1 = res.global_vertex(0, 0), res.global_vertex(0, 1)
    a = to_alt(res, {v0: Fraction(1)})
    b = to_alt(res, {v1: Fraction(1)})
    lhs, rhs, ok = d1_bound_check(res, a, b)
    assert lhs == rhs == 2 and ok


def test_induced_map_identity():
    X = rotating_circle()
    fiber = GComplex(X.vertex_stabilizer(0).as_group(), 2,
                     [frozenset([0]), frozenset([1]), frozenset([0, 1])], [])
    res = resolve(resolution_data(X, {0: fiber}))
    m = induced_map(res, res, {0: (0, 1)})
    assert m.vertex_map == tuple(range(res.complex.nverts))


def collapse_test_complexes():
    yield full_simplex(2)
    out = GComplex(trivial_group(), 3,
                   [frozenset([0]), frozenset([1]), frozenset([2]),
                    frozenset([0, 1]), frozenset([1, 2]), frozenset([0, 2])],
                   [])
    yield out


def same_homology(h1, h2):
    top = max(len(h1.groups), len(h2.groups))
    return all(h1.betti(d) == h2.betti(d) and h1.torsion(d) == h2.torsion(d)
               for d in range(top))


def test_induced_map_collapse_preserves_homology():
    for X in collapse_test_complexes():
        fibers = {orbit[0]: full_simplex(1) for orbit in X.vertex_orbits()}
        data = resolution_data(X, fibers)
        res = resolve(data)
        points = {orbit[0]: point_complex(trivial_group())
                  for orbit in X.vertex_orbits()}
        data2 = resolution_data(X, points)
        res2 = resolve(data2)
        tau = {orbit[0]: (0, 0) for orbit in X.vertex_orbits()}
        m = induced_map(res, res2, tau)
        assert m.check_equivariant()
        assert same_homology(homology(res.complex), homology(res2.complex))


def test_canonical_projection_cone_fibers():
    X = rotating_circle()
    stab = X.vertex_stabilizer(0).as_group()
    fiber = cone(GComplex(stab, 2,
                          [frozenset([0]), frozenset([1])], []))
    res = resolve(resolution_data(X, {0: fiber}))
    proj = canonical_projection(res)
    assert proj.check_equivariant()
    assert same_homology(homology(X, reduced=True),
                         homology(res.complex, reduced=True))


def test_recursive_resolution_all_dress_untouched():
    G = symmetric(3)
    X = point_complex(G)   # S3 is in the Dress family
    rep = recursive_resolution(X, lambda H: None)
    assert rep.steps == 0
    assert rep.obligations == []
    assert rep.complex is X


def test_recursive_resolution_decline_is_obligation():
    G = alternating(5)
    X = point_complex(G)
    rep = recursive_resolution(X, lambda H: None)
    assert rep.steps == 0
    assert len(rep.obligations) == 1
    assert rep.obligations[0].order == 60


def test_recursive_resolution_one_step_a5():
    G = alternating(5)
    X = point_complex(G)

    def provider(H):
        if H.order != 60:
            return None
        # orbit of the five 4-point blocks: fixed-point free, not acyclic
        from eqres.groups import all_subgroups
        from eqres.burnside import marks
        from tests.test_burnside import orbit_complex
        a4 = next(S for S in all_subgroups(H) if S.order == 12)
        return orbit_complex(H, a4)

    rep = recursive_resolution(X, provider)
    assert rep.steps == 1
    assert rep.obligations == []
    assert rep.notes  # acyclicity not certified for the orbit fiber
    for orbit in rep.complex.vertex_orbits():
        stab = rep.complex.vertex_stabilizer(orbit[0])
        from eqres.classify import is_dress
        assert is_dress(stab.as_group()).verdict is True
    assert rep.dimension_bound is not None
    assert rep.dimension <= rep.dimension_bound
