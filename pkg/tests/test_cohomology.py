import pytest
from hypothesis import given, settings, strategies as st

from mcmbundles import cohomology as coh
from mcmbundles.cohomology import (
    CohomologyTable,
    GenericityError,
    InternalConsistencyError,
    LineBundleSum,
    UnsupportedDimensionError,
    bundle_cohomology,
    chern_data,
    cohomology_table,
    dual_bundle_cohomology,
    euler_characteristic,
    line_bundle_cohomology,
    make_bundle,
)
from mcmbundles.constructors import (
    SteinerParams,
    euler_tangent,
    ideal_point_extension,
    line_bundle,
    local_freeness_probe,
    random_presentation,
    random_steiner,
    split_bundle,
    stable_02_bundle,
)
from mcmbundles.forms import HomogeneousForm
from mcmbundles.linalg import PrimeField

import oracles

# The printed cohomology table of T_{P^2} on twists -8..3, rows h^2, h^1, h^0.
TANGENT_TABLE = {
    2: (24, 15, 8, 3, 0, 0, 0, 0, 0, 0, 0, 0),
    1: (0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0),
    0: (0, 0, 0, 0, 0, 0, 0, 3, 8, 15, 24, 35),
}

seeds = st.integers(0, 10**6)


# -- line bundles ------------------------------------------------------------------------

@pytest.mark.parametrize("n,d,i,expected", [(2, 2, 0, 6), (2, -3, 2, 1), (3, -5, 3, 4), (2, 5, 1, 0)])
def test_line_bundle_examples(n, d, i, expected):
    assert line_bundle_cohomology(n, d, i) == expected


def test_line_bundle_degree_out_of_range():
    with pytest.raises(ValueError):
        line_bundle_cohomology(2, 0, 3)


@settings(max_examples=80)
@given(st.integers(1, 5), st.integers(-12, 12), st.integers(0, 5))
def test_line_bundle_matches_bott(n, d, i):
    if i > n:
        return
    assert line_bundle_cohomology(n, d, i) == oracles.bott(n, d, i)


@settings(max_examples=60)
@given(st.integers(1, 5), st.integers(-12, 12))
def test_line_bundle_chi_is_binomial_polynomial(n, d):
    L = LineBundleSum(n, (d,))
    assert L.chi(0) == oracles.chi_poly_value(n, d)


# -- the tangent table ---------------------------------------------------------------------

def test_tangent_table_reproduced():
    tab = cohomology_table(euler_tangent(2, 0), -8, 3)
    for i, row in TANGENT_TABLE.items():
        assert tab.row(i) == row


@pytest.mark.parametrize("m,i,expected", [(-3, 1, 1), (-8, 2, 24), (3, 0, 35)])
def test_tangent_entries(m, i, expected):
    assert bundle_cohomology(euler_tangent(2, 0), m, i) == expected


def test_twisted_tangent_has_three_sections():
    assert bundle_cohomology(euler_tangent(2, -1), 0, 0) == 3


def test_trivial_line_bundle_column():
    tab = cohomology_table(line_bundle(2, 0), 0, 0)
    assert [tab[i, 0] for i in range(3)] == [1, 0, 0]


def test_table_render_layout():
    text = cohomology_table(euler_tangent(2, 0), -8, 3).render("T")
    lines = text.splitlines()
    assert lines[0].split("|")[1].split() == [str(k) for k in range(-8, 4)]
    assert lines[2].startswith("h^2(T(k))") and lines[4].startswith("h^0(T(k))")
    assert lines[2].split("|")[1].split() == [str(v) for v in TANGENT_TABLE[2]]


def test_table_serialisation_round_trip():
    tab = cohomology_table(euler_tangent(3, -1), -5, 1)
    again = CohomologyTable.from_dict(tab.to_dict())
    assert again == tab


@pytest.mark.parametrize("n", [3, 4])
def test_tangent_pattern_higher_dimension(n):
    tab = cohomology_table(euler_tangent(n, 0), -n - 5, 2)
    for m in tab.twists:
        assert (tab[0, m] > 0) == (m >= -1)
        assert (tab[n - 1, m] > 0) == (m == -n - 1)
        assert (tab[n, m] > 0) == (m <= -n - 3)
        for i in range(1, n - 1):
            assert tab[i, m] == 0


def test_steiner_window_regression():
    # h^1(E(-1)) = t; h^1(E(-2)) = 1 for generic phi (6 -> 5 surjective)
    for seed in (0, 1, 2):
        E = random_steiner(SteinerParams(2, 2, 3, 1, seed))
        tab = cohomology_table(E, -2, -1)
        assert tab.row(0) == (0, 0) and tab.row(2) == (0, 0)
        assert tab.row(1) == (1, 2)


# -- Euler characteristic and Chern data --------------------------------------------------

def test_chi_examples():
    S = stable_02_bundle(0)
    assert all(euler_characteristic(S, m) == m * m + 3 * m for m in range(-6, 7))
    assert euler_characteristic(line_bundle(2, 1)) == 3
    Ex = ideal_point_extension((1, 2, 3))
    assert euler_characteristic(Ex) == 2 - chern_data(Ex).c2 == 1
    assert euler_characteristic(S) == 2 - chern_data(S).c2 == 0


def test_chern_examples():
    S = stable_02_bundle(0)
    assert (chern_data(S).rank, chern_data(S).c1, chern_data(S).c2) == (2, 0, 2)
    for d in (-3, 0, 4):
        c = chern_data(line_bundle(2, d))
        assert (c.rank, c.c1, c.c2) == (1, d, 0)
    c = chern_data(euler_tangent(2, 0))
    assert (c.rank, c.c1, c.c2) == (2, 3, 3)


def test_chern_only_on_plane():
    with pytest.raises(UnsupportedDimensionError):
        chern_data(euler_tangent(3, 0))


def test_chi_polynomial_leading_coefficient():
    for E in (euler_tangent(2, -1), stable_02_bundle(1), random_steiner(SteinerParams(2, 3, 4, 1, 0))):
        cd = chern_data(E)
        assert cd.chi_poly[0] * 2 == E.rank
        assert all(cd.chi(m) == euler_characteristic(E, m) for m in range(-7, 7))


def test_steiner_chi_values():
    # chi(E(-1)) = -t and chi(E(-3)) = 3r - 3t for 0 -> O(-2)^t -> O(-1)^(t+r)
    for t, r in [(2, 3), (3, 4), (4, 6)]:
        E = random_steiner(SteinerParams(2, t, r, 1, 0))
        assert euler_characteristic(E, -1) == -t
        assert euler_characteristic(E, -3) == 3 * r - 3 * t


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_riemann_roch_matches_direct_chi(seed):
    E = random_presentation(2, seed)
    cd = chern_data(E)
    assert all(cd.chi(m) == euler_characteristic(E, m) for m in range(-6, 6))


# -- dual cohomology ---------------------------------------------------------------------

def test_dual_of_line_bundle():
    for d in (-2, 0, 3):
        for m in range(-4, 5):
            assert dual_bundle_cohomology(line_bundle(2, d), m, 0) == line_bundle_cohomology(2, m - d, 0)


def test_cotangent_of_tangent():
    assert dual_bundle_cohomology(euler_tangent(2, 0), 1, 0) == 0


# -- properties on random presentations -----------------------------------------------------

@settings(max_examples=12, deadline=None)
@given(st.sampled_from([2, 3]), seeds)
def test_chi_consistency(n, seed):
    E = random_presentation(n, seed)
    for m in range(-6, 4):
        h = [bundle_cohomology(E, m, i) for i in range(n + 1)]
        assert sum((-1) ** i * v for i, v in enumerate(h)) == euler_characteristic(E, m)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([2, 3]), seeds)
def test_serre_duality(n, seed):
    E = random_presentation(n, seed, rank=n)
    if not local_freeness_probe(E, 8, seed).locally_free:
        return
    for m in range(-4, 4):
        for i in range(n + 1):
            assert dual_bundle_cohomology(E, m, i) == bundle_cohomology(E, -m - n - 1, n - i)


@settings(max_examples=8, deadline=None)
@given(st.sampled_from([3, 4]), seeds)
def test_middle_vanishing(n, seed):
    E = random_presentation(n, seed, max_source=1)
    for m in range(-n - 3, 2):
        for i in range(1, n - 1):
            assert bundle_cohomology(E, m, i) == 0


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([2, 3]), seeds)
def test_sections_persist_under_twisting(n, seed):
    E = random_presentation(n, seed)
    h0 = [bundle_cohomology(E, m, 0) for m in range(-6, 4)]
    first = next((k for k, v in enumerate(h0) if v), None)
    if first is not None:
        assert all(v > 0 for v in h0[first:])


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_engine_matches_sympy_oracle(seed):
    E = random_presentation(2, seed, max_source=1)
    for m in (-5, -3, -1, 0, 1):
        assert [bundle_cohomology(E, m, i) for i in range(3)] == oracles.presented_cohomology(E, m)


def test_engine_matches_oracle_on_p3_steiner():
    E = random_steiner(SteinerParams(3, 2, 3, 1, 4))
    for m in (-6, -4, -2, -1, 0):
        assert [bundle_cohomology(E, m, i) for i in range(4)] == oracles.presented_cohomology(E, m)


@settings(max_examples=8, deadline=None)
@given(seeds)
def test_large_prime_agrees_with_rationals(seed):
    E = random_presentation(2, seed)
    F = PrimeField(2147483629)
    for m in range(-5, 3):
        for i in range(3):
            assert bundle_cohomology(E, m, i, F) == bundle_cohomology(E, m, i)


# -- errors -------------------------------------------------------------------------------

def test_non_injective_presentation_is_reported():
    zero = HomogeneousForm.zero(2, 1)
    E = make_bundle(2, (0,), (1, 1), [[zero], [zero]], "zero-map", check=False)
    with pytest.raises(GenericityError):
        bundle_cohomology(E, 0, 0)
    with pytest.raises(GenericityError):
        make_bundle(2, (0,), (1, 1), [[zero], [zero]], "zero-map")


def test_degree_checked_on_construction():
    x0 = HomogeneousForm.variable(2, 0)
    with pytest.raises(ValueError):
        make_bundle(2, (0,), (2, 2), [[x0], [x0]])


def test_rank_must_be_positive():
    x0 = HomogeneousForm.variable(2, 0)
    with pytest.raises(ValueError):
        make_bundle(2, (0,), (1,), [[x0]])


def test_table_consistency_violation_is_loud(monkeypatch):
    monkeypatch.setattr(coh, "euler_characteristic", lambda E, m=0: 10**6)
    with pytest.raises(InternalConsistencyError):
        coh.cohomology_table(split_bundle(2, (0, 1)), 0, 0)


def test_twist_provenance_and_equality():
    T = euler_tangent(2, 0)
    assert T.twist(-1).provenance == "twist(tangent(n=2,m=0),m=-1)"
    assert T.twist(-1) == euler_tangent(2, -1)
