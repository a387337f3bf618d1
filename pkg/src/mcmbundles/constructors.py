"""Named bundles on P^n as two-term presentations, plus genericity probes."""

from __future__ import annotations

import ast
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

import numpy as np
import sympy

from .cohomology import (
    GenericityError,
    PresentedBundle,
    UnsupportedDimensionError,
    bundle_cohomology,
    chern_data,
    make_bundle,
)
from .forms import (
    HomogeneousForm,
    dim_forms,
    form_determinant,
    multiplication_matrix,
    random_form,
)
from .linalg import QQ, Matrix, PrimeField, rank

COEFF_RANGE = (-9, 9)
_CERT_PRIME = 2**31 - 1
RESAMPLE_BUDGET = 8


@dataclass(frozen=True)
class SteinerParams:
    """Parameters of 0 -> O(-n)^{kt} -> O(-n+1)^{k(t+r)} -> E_k -> 0."""

    n: int
    t: int
    r: int
    k: int = 1
    seed: int = 0
    field: str = "QQ"

    def __post_init__(self):
        if min(self.n, self.t, self.r, self.k) < 1:
            raise ValueError("n, t, r, k must be positive")
        if self.r < self.n:
            raise ValueError(f"need r >= n for local freeness (r={self.r}, n={self.n})")

    @property
    def provenance(self):
        return f"steiner(n={self.n},t={self.t},r={self.r},k={self.k},seed={self.seed})"


@dataclass(frozen=True)
class PlanePoint:
    """A point of P^2, scaled so its last nonzero coordinate is 1."""

    coords: tuple

    def __post_init__(self):
        c = tuple(Fraction(x) for x in self.coords)
        if len(c) != 3 or not any(c):
            raise ValueError(f"degenerate point {self.coords}")
        last = next(x for x in reversed(c) if x != 0)
        object.__setattr__(self, "coords", tuple(x / last for x in c))

    def integer_coords(self):
        """The primitive integer representative."""
        den = 1
        for x in self.coords:
            den = den * x.denominator // gcd(den, x.denominator)
        v = [int(x * den) for x in self.coords]
        g = 0
        for x in v:
            g = gcd(g, x)
        return tuple(x // g for x in v)

    @classmethod
    def random(cls, seed, bound=9):
        rng = random.Random(seed)
        while True:
            c = tuple(rng.randint(-bound, bound) for _ in range(3))
            if any(c):
                return cls(c)


def _linear(coeffs):
    return HomogeneousForm.linear(list(coeffs))


def _random_linear(n, rng):
    lo, hi = COEFF_RANGE
    return random_form(n, 1, rng, lo, hi)


# -- simple families ---------------------------------------------------------

def split_bundle(n, twists, provenance=None):
    """O(d_1) + ... + O(d_r) presented as coker(0 -> sum O(d_i))."""
    twists = tuple(int(d) for d in twists)
    prov = provenance or f"split(n={n},twists={twists})"
    return make_bundle(n, (), twists, [() for _ in twists], prov, check=False)


def line_bundle(n, d):
    return split_bundle(n, (d,), f"line_bundle(n={n},d={d})")


def euler_tangent(n: int, m: int = 0) -> PresentedBundle:
    """T_{P^n}(m) = coker(O(m) -> O(m+1)^{n+1}), phi = (x_0, ..., x_n)^T."""
    if n < 1:
        raise ValueError("n must be positive")
    phi = [[HomogeneousForm.variable(n, i)] for i in range(n + 1)]
    return make_bundle(n, (m,), (m + 1,) * (n + 1), phi, f"tangent(n={n},m={m})", check=False)


def cotangent_cohomology(n: int, l: int, m: int, i: int, field=QQ) -> int:
    """h^i(Omega(l)(m)) = h^{n-i}(T(-l-m-n-1)) by Serre duality."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return bundle_cohomology(euler_tangent(n, 0), -l - m - n - 1, n - i, field)


def _vanishing_linear_forms(x):
    """Two independent integer linear forms vanishing at the point x of P^2."""
    x0, x1, x2 = x
    cands = [(x1, -x0, 0), (x2, 0, -x0), (0, x2, -x1)]
    for a, b in combinations(cands, 2):
        if rank(Matrix([list(a), list(b)])) == 2:
            return _linear(a), _linear(b)
    raise ValueError(f"degenerate point {x}")


def ideal_point_extension(x, q_seed=0) -> PresentedBundle:
    """The non-split extension 0 -> O -> E_x -> I_x -> 0 on P^2.

    Presented as coker(O(-2) -> O(-1)^2 + O) with column (l1, l2, q), where
    l1, l2 span the linear forms vanishing at x and q is a conic with
    q(x) != 0.
    """
    pt = x if isinstance(x, PlanePoint) else PlanePoint(tuple(x))
    xi = pt.integer_coords()
    l1, l2 = _vanishing_linear_forms(xi)
    rng = random.Random(q_seed)
    lo, hi = COEFF_RANGE
    for _ in range(64):
        q = random_form(2, 2, rng, lo, hi)
        if q(xi) != 0:
            break
    else:
        raise GenericityError("could not draw a conic missing x")
    prov = f"ideal_point_extension(x={xi},q_seed={q_seed})"
    return make_bundle(2, (-2,), (-1, -1, 0), [[l1], [l2], [q]], prov)


def trivial_extension(x) -> PresentedBundle:
    """O + I_x, presented by the column (l1, l2, 0); not locally free at x."""
    pt = x if isinstance(x, PlanePoint) else PlanePoint(tuple(x))
    xi = pt.integer_coords()
    l1, l2 = _vanishing_linear_forms(xi)
    return make_bundle(
        2, (-2,), (-1, -1, 0), [[l1], [l2], [0]], f"trivial_extension(x={xi})"
    )


def _random_linear_matrix(n, rows, cols, rng):
    return [[_random_linear(n, rng) for _ in range(cols)] for _ in range(rows)]


def stable_02_bundle(seed=0, field=QQ) -> PresentedBundle:
    """A general cokernel of O(-2)^2 -> O(-1)^4: rank 2, c1 = 0, c2 = 2."""
    rng = random.Random(seed)
    prov = f"stable_02(seed={seed})"
    for _ in range(RESAMPLE_BUDGET):
        phi = _random_linear_matrix(2, 4, 2, rng)
        E = make_bundle(2, (-2, -2), (-1,) * 4, phi, prov, check=False)
        if not E.generically_injective(field=field):
            continue
        if local_freeness_probe(E, 8, seed, field).verdict == DEGENERATE:
            continue
        if hoppe_rank2_stability(E, field):
            return E
    raise GenericityError(f"{prov}: no generic sample within {RESAMPLE_BUDGET} draws")


def random_steiner(p=None, *, field=QQ, **kwargs) -> PresentedBundle:
    """0 -> O(-n)^{kt} -> O(-n+1)^{k(t+r)} -> E_k -> 0 with random linear entries.

    Coefficients are uniform in [-9, 9], drawn from ``p.seed``.  Only
    injectivity at a random point is checked here; local freeness and the
    vanishing are left to the caller so that failures stay visible.
    """
    if p is None:
        p = SteinerParams(**kwargs)
    rng = random.Random(p.seed)
    s, q = p.k * p.t, p.k * (p.t + p.r)
    for _ in range(RESAMPLE_BUDGET):
        phi = _random_linear_matrix(p.n, q, s, rng)
        E = make_bundle(p.n, (-p.n,) * s, (-p.n + 1,) * q, phi, p.provenance, check=False)
        if E.generically_injective(field=field):
            return E
    raise GenericityError(f"{p.provenance}: phi not injective after {RESAMPLE_BUDGET} draws")


def random_presentation(n, seed=0, rank=None, max_source=2, field=QQ):
    """A random presentation with mixed twists, for property tests.

    Source twists sit one or two below a base twist in [-3, -1], target
    twists one or two above it, so every entry is a random form of degree
    1 to 3.  With ``rank >= n`` the cokernel is locally free for generic
    coefficients.
    """
    rng = random.Random(seed)
    s = rng.randint(1, max_source)
    r = rank if rank is not None else rng.randint(1, n + 1)
    base = rng.randint(-3, -1)
    source = tuple(sorted((base - rng.randint(0, 1) for _ in range(s)), reverse=True))
    target = tuple(sorted((base + rng.randint(1, 2) for _ in range(s + r)), reverse=True))
    prov = f"random_presentation(n={n},seed={seed},rank={rank},max_source={max_source})"
    lo, hi = COEFF_RANGE
    for _ in range(RESAMPLE_BUDGET):
        phi = [[random_form(n, b - a, rng, lo, hi) for a in source] for b in target]
        E = make_bundle(n, source, target, phi, prov, check=False)
        if E.generically_injective(field=field):
            return E
    raise GenericityError(f"{prov}: not injective after {RESAMPLE_BUDGET} draws")


# -- local freeness ------------------------------------------------------------

CERTIFIED = "certified-generic"
PROBABLE = "probably-locally-free"
DEGENERATE = "degenerate-at-point"


@dataclass(frozen=True)
class ProbeResult:
    verdict: str
    witness: tuple = None
    trials: int = 0
    detail: str = ""

    @property
    def locally_free(self):
        return self.verdict != DEGENERATE

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "witness": list(self.witness) if self.witness is not None else None,
            "trials": self.trials,
            "detail": self.detail,
        }


def _rank_at(E, point, field):
    return rank(Matrix(E.evaluate(point), field=field))


def _maximal_minors(E, limit, rng):
    s, q = len(E.source), len(E.target)
    rows = list(combinations(range(q), s))
    if len(rows) > limit:
        rows = rng.sample(rows, limit)
    minors = []
    for rs in rows:
        f = form_determinant([list(E.phi[i]) for i in rs])
        if not f.is_zero():
            minors.append(f)
    return minors


def _minors_fill_a_degree(E, minors, max_dim):
    """True when the minors generate every form of some degree.

    Then they have no common zero, so phi has full rank everywhere.  Ranks
    are taken mod a large prime: a full rank there is full over Q as well,
    so a True answer is exact.
    """
    n = E.n
    if not minors:
        return False
    fp = PrimeField(_CERT_PRIME)
    degs = [f.degree for f in minors]
    d = min(degs)
    top = (n + 1) * max(max(degs) - 1, 0) + max(degs) + 1
    while d <= top and dim_forms(n, d) <= max_dim:
        blocks = [multiplication_matrix(f, d - f.degree, field=fp).array
                  for f in minors if f.degree <= d]
        stacked = np.hstack(blocks) if len(blocks) > 1 else blocks[0]
        if rank(Matrix._wrap(np.ascontiguousarray(stacked), fp)) == dim_forms(n, d):
            return True
        d += 1
    return False


def _linear_locus_points(E, minors, rng, count):
    """Sample points where every linear minor vanishes."""
    lin = [f for f in minors if f.degree == 1]
    if not lin:
        return []
    ker = sympy.Matrix([f.coefficient_vector() for f in lin]).nullspace()
    if not ker:
        return []
    basis = []
    for v in ker:
        den = sympy.ilcm(*[sympy.fraction(x)[1] for x in v])
        basis.append([int(x * den) for x in v])
    pts = [tuple(b) for b in basis]
    for _ in range(count):
        coeffs = [rng.randint(-5, 5) for _ in basis]
        p = tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(E.n + 1))
        if any(p):
            pts.append(p)
    return pts


def local_freeness_probe(E: PresentedBundle, trials=16, seed=0, field=QQ,
                         certify=True, max_minors=60, max_dim=400) -> ProbeResult:
    """Test whether phi(P) has full column rank at every point P.

    Random points (and points on the common zero set of any linear maximal
    minors) are searched for a rank drop.  Without one, the verdict is
    upgraded to certified when the maximal minors generate all forms of
    some degree, which rules out a common zero exactly.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    s = len(E.source)
    if s == 0:
        return ProbeResult(CERTIFIED, None, 0, "split sum of line bundles")
    rng = random.Random(seed)
    pts = []
    while len(pts) < trials:
        p = tuple(rng.randint(-9, 9) for _ in range(E.n + 1))
        if any(p):
            pts.append(p)
    minors = None
    if s <= 4:
        minors = _maximal_minors(E, max_minors, rng)
        pts += _linear_locus_points(E, minors, rng, trials)
    for p in pts:
        if _rank_at(E, p, field) < s:
            return ProbeResult(DEGENERATE, p, len(pts), "phi drops rank")
    if certify and minors is not None and _minors_fill_a_degree(E, minors, max_dim):
        return ProbeResult(CERTIFIED, None, len(pts), "maximal minors have no common zero")
    return ProbeResult(PROBABLE, None, len(pts), "full rank at every sampled point")


# -- stability -------------------------------------------------------------------

def hoppe_rank2_stability(E: PresentedBundle, field=QQ) -> bool:
    """Sufficient stability test for rank-2 bundles on P^2.

    Twist so that c1 is -1 or 0 and ask for no global sections.  ``False``
    is inconclusive.
    """
    if E.n != 2:
        raise UnsupportedDimensionError("the rank-2 Hoppe check is implemented on P^2 only")
    if E.rank != 2:
        raise UnsupportedDimensionError(f"rank {E.rank} needs exterior powers; only rank 2 is supported")
    k = (-chern_data(E).c1) // 2
    return bundle_cohomology(E, k, 0, field) == 0


# -- provenance ------------------------------------------------------------------

def _literal(node):
    return ast.literal_eval(node)


def bundle_from_provenance(text, field=QQ):
    """Rebuild a bundle from its provenance string, e.g. ``tangent(n=2,m=-1)``."""
    tree = ast.parse(text.strip(), mode="eval").body
    return _build(tree, field)


def _build(node, field):
    if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Name):
        raise ValueError(f"cannot rebuild bundle from {ast.unparse(node)!r}")
    name = node.func.id
    kw = {k.arg: _literal(k.value) for k in node.keywords}
    if name == "twist":
        return _build(node.args[0], field).twist(kw["m"])
    if name == "tangent":
        return euler_tangent(kw["n"], kw.get("m", 0))
    if name == "line_bundle":
        return line_bundle(kw["n"], kw["d"])
    if name == "split":
        return split_bundle(kw["n"], kw["twists"])
    if name == "steiner":
        return random_steiner(SteinerParams(**kw), field=field)
    if name == "stable_02":
        return stable_02_bundle(kw["seed"], field)
    if name == "ideal_point_extension":
        return ideal_point_extension(kw["x"], kw.get("q_seed", 0))
    if name == "trivial_extension":
        return trivial_extension(kw["x"])
    if name == "random_presentation":
        return random_presentation(field=field, **kw)
    if name == "matrix":
        from .matrixfile import load_matrix_file

        return load_matrix_file(kw["file"], kw.get("sha256"))
    raise ValueError(f"unknown constructor {name!r}")


__all__ = [
    "CERTIFIED",
    "DEGENERATE",
    "PROBABLE",
    "PlanePoint",
    "ProbeResult",
    "SteinerParams",
    "bundle_from_provenance",
    "cotangent_cohomology",
    "euler_tangent",
    "hoppe_rank2_stability",
    "ideal_point_extension",
    "line_bundle",
    "local_freeness_probe",
    "random_presentation",
    "random_steiner",
    "split_bundle",
    "stable_02_bundle",
    "trivial_extension",
]
