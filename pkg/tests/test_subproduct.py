import numpy as np
import pytest

from spsys import CommutationRelation, flip_relation, scalar_relation
from spsys.subproduct import (
    PartialDataError,
    StaircaseError,
    StaircaseSet,
    SubproductSystem,
    adjoin_over_n,
    dimension_profile,
    fiber_formula_check,
    from_fiber_bases,
    graded_degrees,
    maximal_completion,
    product_system,
    proper_splits,
    split_meet,
    validate,
)
from spsys.commutation import big_w
from spsys.tensor_linalg import (
    identity,
    meet_projections,
    orthonormal_range_basis,
    projection_onto_span,
    rank_of_projection,
)
from .util import (
    random_relation,
    random_subprojection,
    random_system,
    staircase_system,
    xmn_system,
)


def test_graded_order_is_total_degree_then_e_heavy():
    assert graded_degrees(2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_proper_splits():
    assert proper_splits((1, 1)) == [((0, 1), (1, 0)), ((1, 0), (0, 1))]
    assert proper_splits((1, 0)) == []
    assert len(proper_splits((2, 2))) == 7


def test_staircase_downward_closure():
    StaircaseSet.from_degrees([(0, 0), (1, 0), (0, 1), (1, 1)])
    with pytest.raises(StaircaseError):
        StaircaseSet.from_degrees([(0, 0), (2, 0)])


# -- validate -------------------------------------------------------------------


def test_validate_full_product_system():
    assert validate(product_system(flip_relation(2, 2), 3)).ok


def test_validate_degree_one_shell():
    # all fibers above total degree one vanish; valid for any dimensions
    for m, n in [(1, 2), (2, 1), (3, 0)]:
        report = validate(xmn_system(m, n, D=2))
        assert report.ok, report.summary()


def test_validate_flags_tampered_split(rng):
    m, n = 2, 1
    sps = product_system(flip_relation(m, n), 2)
    proj = dict(sps.proj)
    proj[(1, 0)] = np.diag([1.0, 0.0]).astype(complex)  # rank-deficient
    broken = SubproductSystem(sps.cr, 2, proj)
    report = validate(broken)
    assert not report.ok
    kinds = {(v.kind, v.degree) for v in report.violations}
    assert ("standardness", (1, 0)) in kinds
    split_hits = [v for v in report.violations
                  if v.degree == (2, 0) and v.split == ((1, 0), (1, 0))]
    assert split_hits, "expected a split violation at (2,0)=(1,0)+(1,0)"


def test_validate_reports_missing_fiber():
    sps = product_system(flip_relation(1, 1), 2)
    proj = dict(sps.proj)
    del proj[(1, 1)]
    report = validate(SubproductSystem(sps.cr, 2, proj))
    assert any(v.kind == "missing-fiber" and v.degree == (1, 1)
               for v in report.violations)


def test_validate_never_raises_on_non_projection():
    sps = product_system(flip_relation(1, 1), 2)
    proj = dict(sps.proj)
    proj[(2, 0)] = np.array([[0.5]], dtype=complex)
    report = validate(SubproductSystem(sps.cr, 2, proj))
    assert any(v.kind == "not-projection" for v in report.violations)


# -- maximal completion -----------------------------------------------------------


def test_completion_of_full_data_is_identity_map():
    sps = product_system(flip_relation(2, 1), 3)
    completed = maximal_completion(sps.cr, dict(sps.proj), 3)
    for deg in graded_degrees(3):
        np.testing.assert_allclose(completed.projection(deg), sps.projection(deg),
                                   atol=1e-12)


def test_completion_fiber_formula_example():
    # one chosen line in the degree-(2,0) block, flip relation, m=2, n=1
    cr = flip_relation(2, 1)
    v = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2)
    p20 = np.outer(v, v.conj())
    sps = maximal_completion(cr, {(2, 0): p20}, D=3)
    assert validate(sps).ok
    # the (3,0) fiber is the intersection of the two one-slot extensions
    expected = meet_projections([
        np.kron(p20, identity(2)), np.kron(identity(2), p20)])
    np.testing.assert_allclose(sps.projection((3, 0)), expected, atol=1e-9)
    assert fiber_formula_check(sps, (3, 0), L=[(0, 0), (1, 0), (0, 1), (2, 0)])


def test_completion_scalar_relation_gives_full_system():
    cr = CommutationRelation(1, 1, np.array([[1.0]], dtype=complex))
    sps = maximal_completion(cr, {}, D=4)
    for deg in graded_degrees(4):
        np.testing.assert_allclose(sps.projection(deg), np.eye(1), atol=1e-12)


def test_completion_rejects_bad_staircase():
    cr = flip_relation(1, 1)
    with pytest.raises(StaircaseError):
        maximal_completion(cr, {(2, 0): np.eye(1)}, D=1)
    with pytest.raises(StaircaseError):
        maximal_completion(
            cr, {(2, 0): np.eye(1), (1, 1): np.eye(1), (0, 2): np.eye(1)}, D=2)


def test_completion_rejects_invalid_partial_data():
    cr = flip_relation(1, 1)
    # (2,0) forced zero but (3,0)... build direct violation: p(1,1)=1 needs no
    # constraint; make p(2,0)=I with p(1,0) shrunk impossible: the standard
    # degree cannot be overridden
    with pytest.raises(PartialDataError):
        maximal_completion(cr, {(1, 0): np.zeros((1, 1))}, D=2)
    # violation inside the staircase: zero at (1,1) but full at (2,1)
    partial = {(1, 1): np.zeros((1, 1)), (2, 0): np.eye(1), (0, 1): np.eye(1),
               (2, 1): np.eye(1), (1, 0): np.eye(1), (0, 0): np.eye(1)}
    with pytest.raises(PartialDataError):
        maximal_completion(cr, partial, D=3)
    with pytest.raises(PartialDataError):
        maximal_completion(cr, {(2, 0): np.array([[0.5]])}, D=2)


def test_completion_random_inputs_validate_and_formula(rng):
    for trial in range(6):
        m, n = [(1, 1), (2, 1), (1, 2), (2, 2)][trial % 4]
        full = random_system(rng, m, n, 3, shrink_prob=0.6)
        # keep a random downward-closed staircase of the fibers
        L = [(0, 0), (1, 0), (0, 1)]
        if rng.random() < 0.8:
            L.append((2, 0))
        partial = {deg: full.projection(deg) for deg in L}
        sps = maximal_completion(full.cr, partial, 3)
        assert validate(sps).ok
        for deg in graded_degrees(3):
            if deg not in partial:
                assert fiber_formula_check(sps, deg, L=partial.keys())


def test_completion_dominates_shrunk_competitors(rng):
    cr = random_relation(rng, 2, 1)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    partial = {(2, 0): projection_onto_span([v])}
    sps = maximal_completion(cr, partial, 3)
    for _ in range(5):
        # competitor: same staircase data, random shrink at completed degrees
        proj = {deg: partial.get(deg, None) for deg in graded_degrees(3)}
        for deg in graded_degrees(3):
            if proj[deg] is not None:
                continue
            if deg[0] + deg[1] <= 1:
                proj[deg] = identity(sps.ambient_dim(deg))
            else:
                q = split_meet(proj, cr, deg)
                proj[deg] = random_subprojection(rng, q)
        competitor = SubproductSystem(cr, 3, proj)
        assert validate(competitor).ok
        for deg in graded_degrees(3):
            p_max = sps.projection(deg)
            p_small = competitor.projection(deg)
            assert competitor.fiber_rank(deg) <= sps.fiber_rank(deg)
            np.testing.assert_allclose(p_max @ p_small, p_small, atol=1e-8)


def test_fiber_formula_detects_shrunk_fiber(rng):
    sps = product_system(random_relation(rng, 2, 1), 2)
    proj = dict(sps.proj)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    proj[(2, 0)] = projection_onto_span([v])
    shrunk = SubproductSystem(sps.cr, 2, proj)
    assert validate(shrunk).ok
    assert not fiber_formula_check(shrunk, (2, 0), L=[(0, 0), (1, 0), (0, 1)])
    assert fiber_formula_check(sps, (2, 0))
    with pytest.raises(ValueError):
        fiber_formula_check(shrunk, (2, 0), L=[(2, 0)])


# -- adjoining one-parameter systems ------------------------------------------


def test_adjoin_full_axes_gives_product_system(rng):
    cr = random_relation(rng, 2, 1)
    rows = [identity(2), identity(4), identity(8)]
    cols = [identity(1), identity(1), identity(1)]
    sps = adjoin_over_n(rows, cols, cr, 3)
    for deg in graded_degrees(3):
        np.testing.assert_allclose(sps.projection(deg),
                                   identity(sps.ambient_dim(deg)), atol=1e-9)


def test_adjoin_symmetric_square_axis():
    m, n = 2, 1
    cr = flip_relation(m, n)
    sym_basis = [np.array([1, 0, 0, 0], complex),
                 np.array([0, 1, 1, 0], complex) / np.sqrt(2),
                 np.array([0, 0, 0, 1], complex)]
    p_sym = projection_onto_span(sym_basis)
    rows = [identity(2), p_sym]
    cols = [identity(1), identity(1)]
    sps = adjoin_over_n(rows, cols, cr, 3)
    assert validate(sps).ok
    np.testing.assert_allclose(sps.projection((2, 0)), p_sym, atol=1e-10)
    # (2,1) fiber equals the independent meet of its split compressions
    w_a = big_w(cr, (2, 0), (0, 1))
    w_b = big_w(cr, (1, 0), (1, 1))
    w_c = big_w(cr, (0, 1), (2, 0))
    w_d = big_w(cr, (1, 1), (1, 0))
    expected = meet_projections([
        w_a @ np.kron(p_sym, identity(1)) @ w_a.conj().T,
        w_b @ np.kron(identity(2), sps.projection((1, 1))) @ w_b.conj().T,
        w_b @ np.kron(identity(2), np.kron(identity(2), identity(1))) @ w_b.conj().T,
        w_c @ np.kron(identity(1), p_sym) @ w_c.conj().T,
        w_d @ np.kron(sps.projection((1, 1)), identity(2)) @ w_d.conj().T,
    ])
    np.testing.assert_allclose(sps.projection((2, 1)), expected, atol=1e-9)


def test_adjoin_zero_axis_propagates():
    cr = flip_relation(2, 1)
    rows = [identity(2), np.zeros((4, 4), complex)]
    cols = [identity(1)]
    sps = adjoin_over_n(rows, cols, cr, 4)
    for deg in graded_degrees(4):
        if deg[0] >= 2:
            assert sps.fiber_rank(deg) == 0
        elif deg not in dict():
            pass
    assert sps.fiber_rank((1, 1)) > 0


def test_adjoin_rejects_invalid_axis():
    cr = flip_relation(2, 1)
    rows = [identity(2), np.zeros((4, 4), complex), identity(8)]
    with pytest.raises(PartialDataError):
        adjoin_over_n(rows, [identity(1)], cr, 3)
    with pytest.raises(ValueError):
        adjoin_over_n([identity(2)] * 5, [identity(1)], cr, 3)


# -- dimension profile and zero propagation -------------------------------------


def test_dimension_profile_examples():
    assert dimension_profile(xmn_system(1, 2)) == {
        (0, 0): 1, (1, 0): 1, (0, 1): 2, (2, 0): 0, (1, 1): 0, (0, 2): 0}
    full = product_system(flip_relation(2, 1), 3)
    profile = dimension_profile(full)
    for (i, j), r in profile.items():
        assert r == 2 ** i


def test_dimension_profile_staircase_table():
    profile = dimension_profile(staircase_system(4))
    table = {
        (0, 0): 1, (0, 1): 1, (0, 2): 1, (0, 3): 1, (0, 4): 1,
        (1, 0): 1, (1, 1): 1, (1, 2): 0, (1, 3): 0,
        (2, 0): 1, (2, 1): 1, (2, 2): 0,
        (3, 0): 1, (3, 1): 0,
        (4, 0): 1,
    }
    assert profile == table
    assert validate(staircase_system(4)).ok


def test_zero_propagation_in_valid_systems(rng):
    for _ in range(4):
        sps = random_system(rng, 2, 1, 3, shrink_prob=0.7)
        profile = dimension_profile(sps)
        for (i, j), r in profile.items():
            if r == 0:
                for (k, l), r2 in profile.items():
                    if k >= i and l >= j and (k, l) != (i, j) and (k == i or l == j):
                        assert r2 == 0, f"zero at {(i, j)} must force zero at {(k, l)}"


def test_from_fiber_bases_roundtrip(rng):
    sps = random_system(rng, 2, 1, 2, shrink_prob=0.7)
    bases = {deg: list(sps.fiber_basis(deg).T) for deg in graded_degrees(2)}
    rebuilt = from_fiber_bases(sps.cr, 2, bases)
    for deg in graded_degrees(2):
        np.testing.assert_allclose(rebuilt.projection(deg), sps.projection(deg),
                                   atol=1e-9)
