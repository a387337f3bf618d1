"""Restriction to lines, splitting types and jumping lines in pencils."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .cohomology import (
    PresentedBundle,
    UnsupportedDimensionError,
    bundle_cohomology,
    make_bundle,
    top_map,
)
from .constructors import PlanePoint, local_freeness_probe, DEGENERATE
from .forms import HomogeneousForm
from .linalg import QQ, Matrix, determinant, rank


class TorsionDetectedError(ValueError):
    """The restriction of the presentation to a line has torsion."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class LineParam:
    """The line through P and Q, parametrised as [s:u] -> s P + u Q."""

    n: int
    P: tuple
    Q: tuple

    def __post_init__(self):
        P, Q = tuple(self.P), tuple(self.Q)
        if len(P) != self.n + 1 or len(Q) != self.n + 1:
            raise ValueError("points must have n+1 coordinates")
        if rank(Matrix([list(P), list(Q)])) < 2:
            raise ValueError(f"degenerate line: {P} and {Q} are dependent")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)

    def substitution(self):
        """x_i -> P_i s + Q_i u as binary linear forms."""
        return [HomogeneousForm.linear([p, q]) for p, q in zip(self.P, self.Q)]

    def point(self, s, u):
        return tuple(s * p + u * q for p, q in zip(self.P, self.Q))

    def __str__(self):
        fmt = lambda v: "(" + ", ".join(str(c) for c in v) + ")"
        return f"line(P={fmt(self.P)},Q={fmt(self.Q)})"


def random_line(n, seed, bound=9):
    rng = random.Random(seed)
    while True:
        P = tuple(rng.randint(-bound, bound) for _ in range(n + 1))
        Q = tuple(rng.randint(-bound, bound) for _ in range(n + 1))
        try:
            return LineParam(n, P, Q)
        except ValueError:
            continue


def restrict_to_line(E: PresentedBundle, L: LineParam) -> PresentedBundle:
    """Substitute the parametrisation of L into every entry of phi."""
    if L.n != E.n:
        raise ValueError(f"line lives in P^{L.n}, bundle on P^{E.n}")
    sub = L.substitution()
    phi = [
        [f.substitute(sub) if not f.is_zero() else 0 for f in row]
        for row in E.phi
    ]
    return make_bundle(
        1, E.source.twists, E.target.twists, phi, f"restrict({E.provenance},{L})", check=False
    )


@dataclass(frozen=True)
class SplittingType:
    """E|_L = O(e_1) + ... + O(e_r), stored with e_1 >= ... >= e_r."""

    degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(sorted(self.degrees, reverse=True)))

    @property
    def rank(self):
        return len(self.degrees)

    @property
    def degree(self):
        return sum(self.degrees)

    def multiplicity(self, e):
        """a_e: how many summands have degree e."""
        return Counter(self.degrees)[e]

    def dominates(self, other):
        """Dominance order on types of equal rank and degree."""
        if self.rank != other.rank or self.degree != other.degree:
            return False
        a = b = 0
        for x, y in zip(self.degrees, other.degrees):
            a, b = a + x, b + y
            if a < b:
                return False
        return True

    def __str__(self):
        return str(self.degrees)


def splitting_type(E: PresentedBundle, L: LineParam, field=QQ) -> SplittingType:
    """Read E|_L off its section jumps.

    With g(k) = h^0(E|_L(k)), the difference g(k) - g(k-1) counts summands
    of degree >= -k.  Each e_i is at least min(b) (E|_L is a quotient of
    B|_L) and so at most c1 - (r-1) min(b); a nonzero g below that range
    can only come from torsion.
    """
    R = restrict_to_line(E, L)
    r, c1 = E.rank, E.c1
    lo_e = min(E.target.twists)
    hi_e = c1 - (r - 1) * lo_e
    k_lo, k_hi = -hi_e - 1, -lo_e
    g = {k: bundle_cohomology(R, k, 0, field) for k in range(k_lo, k_hi + 1)}
    if g[k_lo] or g[k_hi] - g[k_hi - 1] != r or any(
        g[k] - g[k - 1] < 0 for k in range(k_lo + 1, k_hi + 1)
    ):
        raise TorsionDetectedError(
            f"{E.provenance} restricted to {L} has torsion", witness=_torsion_witness(E, L)
        )
    counts = {}
    prev = 0
    for k in range(k_lo + 1, k_hi + 1):
        d = g[k] - g[k - 1]
        counts[-k] = d - prev
        prev = d
    degs = [e for e, c in counts.items() for _ in range(c)]
    st = SplittingType(tuple(degs))
    if st.rank != r or st.degree != c1:
        raise TorsionDetectedError(f"inconsistent jumps on {L}: {st}", witness=None)
    return st


def _torsion_witness(E, L):
    probe = local_freeness_probe(restrict_to_line(E, L), trials=8, certify=False)
    if probe.verdict == DEGENERATE:
        s, u = probe.witness
        return L.point(s, u)
    return None


def generic_splitting_type(E, seed=0, attempts=8, field=QQ):
    """Splitting type on a seeded random line, redrawing lines that hit torsion."""
    for a in range(attempts):
        L = random_line(E.n, 1000 * seed + a)
        try:
            return splitting_type(E, L, field)
        except TorsionDetectedError:
            continue
    raise TorsionDetectedError(f"{E.provenance}: every sampled line met the degeneracy locus")


@dataclass(frozen=True)
class ConstraintReport:
    checks: dict

    @property
    def ok(self):
        return all(v for v in self.checks.values() if v is not None)

    def failed(self):
        return [k for k, v in self.checks.items() if v is False]


def splitting_constraints_check(st: SplittingType, rank_, c1, *, h0_minus2=None,
                                h2_minus1=None, nonsplit_mcm=False) -> ConstraintReport:
    """Constraints a generic splitting type of a vanishing-passing bundle on P^2 obeys.

    ``range``: every e_i in [-2, 2].  ``degree`` and ``count``: sum and
    length match c1 and rank.  ``a2``/``a-2`` compare multiplicities with
    h^0(E(-2)) and h^2(E(-1)) when those are given.  ``positivity`` (a_-1 +
    a_0 > 0 and a_0 + a_1 > 0) is asserted only for non-split members.
    """
    a = st.multiplicity
    checks = {
        "range": all(-2 <= e <= 2 for e in st.degrees),
        "degree": st.degree == c1,
        "count": st.rank == rank_,
        "a2": None if h0_minus2 is None else a(2) == h0_minus2,
        "a-2": None if h2_minus1 is None else a(-2) == h2_minus1,
        "positivity": (a(-1) + a(0) > 0 and a(0) + a(1) > 0) if nonsplit_mcm else None,
    }
    return ConstraintReport(checks)


# -- pencils ---------------------------------------------------------------------

@dataclass(frozen=True)
class PencilParam:
    """Lines through ``base`` and lam * P2 + mu * P1, for [lam:mu] in P^1."""

    base: tuple
    P1: tuple
    P2: tuple

    def __post_init__(self):
        if rank(Matrix([list(self.base), list(self.P1), list(self.P2)])) < 3:
            raise ValueError("base, P1, P2 must span P^2")

    def line(self, lam, mu=1):
        other = tuple(mu * a + lam * b for a, b in zip(self.P1, self.P2))
        return LineParam(2, tuple(self.base), other)

    @classmethod
    def from_lines(cls, L1: LineParam, L2: LineParam):
        """The pencil spanned by two lines through a common point."""
        M = sympy.Matrix([list(L1.P), list(L1.Q), list(L2.P), list(L2.Q)])
        if M.rank() != 3:
            raise ValueError("lines must be distinct and meet")
        # common point: x = a P1 + b Q1 = c P2 + d Q2
        ker = sympy.Matrix([list(L1.P), list(L1.Q), [-x for x in L2.P], [-x for x in L2.Q]]).T.nullspace()[0]
        pt = [ker[0] * p + ker[1] * q for p, q in zip(L1.P, L1.Q)]
        base = PlanePoint(tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in pt))
        b = base.integer_coords()
        others = [tuple(L1.P), tuple(L1.Q)]
        p1 = next(o for o in others if rank(Matrix([list(b), list(o)])) == 2)
        others = [tuple(L2.P), tuple(L2.Q)]
        p2 = next(o for o in others if rank(Matrix([list(b), list(o)])) == 2)
        return cls(b, p1, p2)

    @classmethod
    def random(cls, seed, bound=9):
        rng = random.Random(seed)
        while True:
            pts = [tuple(rng.randint(-bound, bound) for _ in range(3)) for _ in range(3)]
            try:
                return cls(*pts)
            except ValueError:
                continue

    def __str__(self):
        return f"pencil(base={self.base},P1={self.P1},P2={self.P2})"


@dataclass(frozen=True)
class JumpingReport:
    pencil: str
    degree: int
    polynomial: tuple
    multiplicity_at_infinity: int
    distinct_roots: int
    rational_roots: tuple
    degenerate: bool = False

    @property
    def multiplicity_sum(self):
        return self.degree

    def to_dict(self):
        return {
            "pencil": self.pencil,
            "degree": self.degree,
            "roots_found": self.distinct_roots,
            "multiplicity_sum": self.multiplicity_sum,
            "multiplicity_at_infinity": self.multiplicity_at_infinity,
            "rational_roots": [str(r) for r in self.rational_roots],
            "polynomial": [str(c) for c in self.polynomial],
            "degenerate": self.degenerate,
        }


def _jump_matrix(E, pencil, lam, mu):
    R = restrict_to_line(E, pencil.line(lam, mu))
    return top_map(R, -1)


def _interpolate(values):
    """Coefficients (low to high) of the polynomial through (x, y) pairs, over Q."""
    x = sympy.Symbol("x")
    pts = [(sympy.Rational(a), sympy.Rational(Fraction(b).numerator, Fraction(b).denominator))
           for a, b in values]
    return sympy.Poly(sympy.interpolate(pts, x), x)


def jumping_lines_in_pencil(E: PresentedBundle, pencil: PencilParam) -> JumpingReport:
    """Count jumping lines of a rank-2, c1 = 0 bundle on P^2 along a pencil.

    A line L jumps iff h^0(E|_L(-1)) > 0.  When every target twist is <= 0,
    H^0(B|_L(-1)) = 0 and that number is the kernel of the square map
    H^1(A|_L(-1)) -> H^1(B|_L(-1)); its determinant D(lam, mu) is a binary
    form whose zeros are the jumping members, counted with multiplicity.
    Computed over Q: D is interpolated from exact determinants.
    """
    if E.n != 2 or E.rank != 2:
        raise UnsupportedDimensionError("jumping lines are implemented for rank-2 bundles on P^2")
    if E.c1 != 0:
        raise UnsupportedDimensionError("only c1 = 0 is implemented; twist the bundle first")
    if max(E.target.twists) > 0:
        raise UnsupportedDimensionError("need every target twist <= 0 for the square jump matrix")
    size = _jump_matrix(E, pencil, 0, 1).shape
    if size[0] != size[1]:
        raise ValueError(f"jump matrix is {size[0]}x{size[1]}, not square")
    if size[0] == 0:
        return JumpingReport(str(pencil), 0, (1,), 0, 0, ())
    emax = max((f.degree for row in E.phi for f in row if not f.is_zero()), default=0)
    npts = size[0] * emax + 1
    affine = _interpolate([(k, determinant(_jump_matrix(E, pencil, k, 1)))
                           for k in range(npts)])
    if affine.is_zero:
        return JumpingReport(str(pencil), 0, (0,), 0, 0, (), degenerate=True)
    reverse = _interpolate([(k, determinant(_jump_matrix(E, pencil, 1, k)))
                            for k in range(npts)])
    # D(lam, mu) = sum c_j lam^j mu^(w - j); D(lam, 1) has degree max j and
    # D(1, mu) has degree w - min j, where min j is the order at lam = 0.
    coeffs = affine.all_coeffs()[::-1]
    order0 = next(j for j, c in enumerate(coeffs) if c != 0)
    w = reverse.degree() + order0
    at_inf = w - affine.degree()
    sqf = sympy.Poly(sympy.sqf_part(affine.as_expr()), affine.gens[0]) if affine.degree() > 0 else None
    distinct = (sqf.degree() if sqf is not None else 0) + (1 if at_inf else 0)
    rat = tuple(Fraction(int(q.p), int(q.q)) for q in sympy.roots(affine, filter="Q")) if affine.degree() > 0 else ()
    return JumpingReport(
        str(pencil), w, tuple(coeffs), at_inf, distinct, rat, degenerate=False
    )


__all__ = [
    "ConstraintReport",
    "JumpingReport",
    "LineParam",
    "PencilParam",
    "SplittingType",
    "TorsionDetectedError",
    "generic_splitting_type",
    "jumping_lines_in_pencil",
    "random_line",
    "restrict_to_line",
    "splitting_constraints_check",
    "splitting_type",
]
