import pytest
from hypothesis import given, settings, strategies as st

from mcmbundles.cohomology import (
    GenericityError,
    UnsupportedDimensionError,
    bundle_cohomology,
    chern_data,
    dual_bundle_cohomology,
    euler_characteristic,
    make_bundle,
)
from mcmbundles.constructors import (
    CERTIFIED,
    DEGENERATE,
    PlanePoint,
    SteinerParams,
    bundle_from_provenance,
    cotangent_cohomology,
    euler_tangent,
    hoppe_rank2_stability,
    ideal_point_extension,
    line_bundle,
    local_freeness_probe,
    random_steiner,
    split_bundle,
    stable_02_bundle,
    trivial_extension,
)
from mcmbundles.forms import HomogeneousForm

seeds = st.integers(0, 10**6)


def proportional(p, q):
    return all(p[i] * q[j] == p[j] * q[i] for i in range(len(p)) for j in range(len(p)))


# -- tangent and cotangent -----------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3, 4])
def test_tangent_rank_and_shape(n):
    T = euler_tangent(n, 0)
    assert T.rank == n
    assert T.source.twists == (0,) and T.target.twists == (1,) * (n + 1)
    assert T.provenance == f"tangent(n={n},m=0)"


@pytest.mark.parametrize("l,m,i,expected", [(0, 0, 1, 1), (2, 0, 0, 3), (1, 0, 0, 0), (0, 2, 0, 3)])
def test_cotangent_examples(l, m, i, expected):
    assert cotangent_cohomology(2, l, m, i) == expected


def test_cotangent_needs_plane_or_higher():
    with pytest.raises(ValueError):
        cotangent_cohomology(1, 0, 0, 0)


# -- E_x and the trivial extension ------------------------------------------------------

POINTS = [(1, 2, 3), (0, 0, 1), (2, -1, 0), (5, 0, -3)]


@pytest.mark.parametrize("x", POINTS)
def test_ideal_point_extension_invariants(x):
    E = ideal_point_extension(x, q_seed=1)
    cd = chern_data(E)
    assert (cd.rank, cd.c1, cd.c2) == (2, 0, 1)
    assert bundle_cohomology(E, 0, 0) == 1
    assert bundle_cohomology(E, -3, 1) == 0
    assert local_freeness_probe(E).verdict == CERTIFIED


@pytest.mark.parametrize("x", POINTS)
def test_trivial_extension_is_different(x):
    F = trivial_extension(x)
    assert bundle_cohomology(F, -3, 1) == 1
    probe = local_freeness_probe(F)
    assert probe.verdict == DEGENERATE
    assert proportional(probe.witness, PlanePoint(tuple(x)).integer_coords())


def test_plane_point_normalisation():
    assert PlanePoint((2, 4, 6)) == PlanePoint((1, 2, 3))
    assert PlanePoint((2, 4, 6)).integer_coords() == (1, 2, 3)
    assert PlanePoint((3, 0, 0)).integer_coords() == (1, 0, 0)
    with pytest.raises(ValueError):
        PlanePoint((0, 0, 0))


# -- stable (0, 2) bundles --------------------------------------------------------------

@pytest.mark.parametrize("seed", [0, 1, 2])
def test_stable_02_invariants(seed):
    S = stable_02_bundle(seed)
    cd = chern_data(S)
    assert (cd.rank, cd.c1, cd.c2) == (2, 0, 2)
    assert bundle_cohomology(S, 0, 0) == 0
    assert all(euler_characteristic(S, m) == m * m + 3 * m for m in range(-5, 6))
    assert hoppe_rank2_stability(S)
    assert local_freeness_probe(S).locally_free


# -- Steiner bundles --------------------------------------------------------------------

def test_steiner_rank_and_provenance():
    p = SteinerParams(2, 2, 3, 1, seed=5)
    E = random_steiner(p)
    assert E.rank == 3
    assert E.provenance == "steiner(n=2,t=2,r=3,k=1,seed=5)"
    assert E.source.twists == (-2,) * 2 and E.target.twists == (-1,) * 5


def test_steiner_higher_k_shape():
    E = random_steiner(SteinerParams(3, 2, 3, 2, seed=1))
    assert E.rank == 6 and len(E.source) == 4 and len(E.target) == 10


def test_steiner_params_validated():
    with pytest.raises(ValueError):
        SteinerParams(3, 2, 2)
    with pytest.raises(ValueError):
        SteinerParams(2, 0, 3)


@pytest.mark.parametrize("n,t,r", [(2, 2, 3), (3, 2, 3)])
def test_steiner_boundary_value(n, t, r):
    # E = V(-n+1), so V(-n) is E(-1)
    for k in (1, 2):
        E = random_steiner(SteinerParams(n, t, r, k, seed=3))
        assert bundle_cohomology(E, -1, n - 1) == k * t
        for m in range(0, 3):
            assert bundle_cohomology(E, m, n - 1) == 0


def test_steiner_probe_is_locally_free():
    assert local_freeness_probe(random_steiner(SteinerParams(2, 2, 3, 1, seed=0))).locally_free


# -- probe -------------------------------------------------------------------------------

@pytest.mark.parametrize("trials", [1, 4, 32])
def test_probe_tangent(trials):
    assert local_freeness_probe(euler_tangent(2, 0), trials).locally_free


def test_probe_finds_common_zero_of_two_lines():
    x0, x1, x2 = (HomogeneousForm.variable(2, i) for i in range(3))
    l1, l2 = x0 - x2, x1 - 2 * x2  # common zero (1, 2, 1)
    E = make_bundle(2, (-1,), (0, 0), [[l1], [l2]], "two-lines")
    probe = local_freeness_probe(E)
    assert probe.verdict == DEGENERATE
    assert proportional(probe.witness, (1, 2, 1))


def test_probe_rejects_zero_trials():
    with pytest.raises(ValueError):
        local_freeness_probe(euler_tangent(2, 0), 0)


def test_probe_result_serialises():
    d = local_freeness_probe(trivial_extension((1, 1, 1))).to_dict()
    assert d["verdict"] == DEGENERATE and len(d["witness"]) == 3


# -- Hoppe -------------------------------------------------------------------------------

def test_hoppe_examples():
    assert not hoppe_rank2_stability(split_bundle(2, (0, 0)))
    assert hoppe_rank2_stability(euler_tangent(2, -2))
    assert hoppe_rank2_stability(euler_tangent(2, 0))  # normalised to T(-2)


def test_hoppe_unsupported_cases():
    with pytest.raises(UnsupportedDimensionError):
        hoppe_rank2_stability(euler_tangent(3, -2))
    with pytest.raises(UnsupportedDimensionError):
        hoppe_rank2_stability(line_bundle(2, 0))


# -- determinism and provenance ---------------------------------------------------------------

@settings(max_examples=10, deadline=None)
@given(seeds)
def test_constructors_are_deterministic(seed):
    assert random_steiner(SteinerParams(2, 2, 3, 1, seed)) == random_steiner(SteinerParams(2, 2, 3, 1, seed))
    assert ideal_point_extension((1, 2, 3), seed) == ideal_point_extension((1, 2, 3), seed)


@pytest.mark.parametrize("build", [
    lambda: euler_tangent(2, -1),
    lambda: euler_tangent(3, 0).twist(-2),
    lambda: line_bundle(3, -2),
    lambda: split_bundle(2, (1, -1)),
    lambda: random_steiner(SteinerParams(3, 2, 3, 1, 7)),
    lambda: stable_02_bundle(4),
    lambda: ideal_point_extension((2, 0, 1), 3),
    lambda: trivial_extension((1, 1, 0)),
])
def test_provenance_rebuilds_identical_bundle(build):
    E = build()
    assert bundle_from_provenance(E.provenance) == E


def test_unknown_provenance_rejected():
    with pytest.raises(ValueError):
        bundle_from_provenance("mystery(n=2)")


# -- cross-checks on constructor outputs -----------------------------------------------------

@pytest.mark.parametrize("build", [
    lambda: ideal_point_extension((1, 2, 3)),
    lambda: stable_02_bundle(0),
    lambda: random_steiner(SteinerParams(2, 3, 4, 1, 2)),
    lambda: euler_tangent(3, -1),
])
def test_constructor_outputs_satisfy_duality(build):
    E = build()
    n = E.n
    for m in range(-4, 3):
        h = [bundle_cohomology(E, m, i) for i in range(n + 1)]
        assert sum((-1) ** i * v for i, v in enumerate(h)) == euler_characteristic(E, m)
        for i in range(n + 1):
            assert dual_bundle_cohomology(E, m, i) == bundle_cohomology(E, -m - n - 1, n - i)


def test_genericity_error_surfaces():
    zero = HomogeneousForm.zero(2, 1)
    with pytest.raises(GenericityError):
        make_bundle(2, (-1,), (0, 0), [[zero], [zero]], "zero")
