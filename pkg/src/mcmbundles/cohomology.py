"""Sheaf cohomology of line bundles and of two-term presentations on P^n.

A :class:`PresentedBundle` is E = coker(phi: sum_j O(a_j) -> sum_i O(b_i)).
Twisting the presentation by m and taking the long exact sequence gives, for
n >= 2,

    h^0(E(m))     = coker of H^0(A(m)) -> H^0(B(m))
    h^i(E(m))     = 0                         for 1 <= i <= n-2
    h^{n-1}(E(m)) = ker   of H^n(A(m)) -> H^n(B(m))
    h^n(E(m))     = coker of H^n(A(m)) -> H^n(B(m))

The H^n-level map is the transpose of multiplication by phi^T between the
Serre-dual spaces of forms, H^0(B^v(-m-n-1)) -> H^0(A^v(-m-n-1)).  On P^1 the
two outer pieces meet and h^0 picks up the H^1-level kernel as well.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .forms import HomogeneousForm, block_matrix, dim_forms, transpose_grid
from .linalg import QQ, Matrix, rank


class GenericityError(RuntimeError):
    """A random construction landed on a non-generic map."""


class InternalConsistencyError(AssertionError):
    """Computed cohomology contradicts the Euler characteristic."""


class UnsupportedDimensionError(ValueError):
    pass


def line_bundle_cohomology(n: int, d: int, i: int) -> int:
    """h^i(P^n, O(d)) (Bott's formula for line bundles)."""
    if not 0 <= i <= n:
        raise ValueError(f"cohomological degree {i} outside [0, {n}]")
    if i == 0:
        return dim_forms(n, d)
    if i == n:
        return dim_forms(n, -d - n - 1)
    return 0


def chi_line_bundle(n: int, d: int) -> int:
    """chi(O(d)) = C(d+n, n) read as a polynomial in d."""
    num = 1
    for k in range(1, n + 1):
        num *= d + k
    return num // factorial(n)


@dataclass(frozen=True)
class LineBundleSum:
    """A direct sum of line bundles O(d_1) + ... + O(d_s) on P^n."""

    n: int
    twists: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(int(d) for d in self.twists))

    def __len__(self):
        return len(self.twists)

    def h(self, i, m=0):
        return sum(line_bundle_cohomology(self.n, d + m, i) for d in self.twists)

    def chi(self, m=0):
        return sum(chi_line_bundle(self.n, d + m) for d in self.twists)

    def dual(self):
        return LineBundleSum(self.n, tuple(-d for d in self.twists))


def _probe_points(n, count, seed=0, bound=7):
    rng = random.Random(seed)
    pts = []
    while len(pts) < count:
        p = tuple(rng.randint(-bound, bound) for _ in range(n + 1))
        if any(p):
            pts.append(p)
    return pts


def evaluate_grid(phi, point):
    return [[f(point) if not f.is_zero() else 0 for f in row] for row in phi]


@dataclass(frozen=True, eq=True)
class PresentedBundle:
    """E = coker(phi) for phi: sum_j O(source_j) -> sum_i O(target_i) on P^n.

    ``phi`` is a tuple of rows, one per target summand; entry (i, j) is a
    form of degree target[i] - source[j], or zero.
    """

    n: int
    source: LineBundleSum
    target: LineBundleSum
    phi: tuple
    provenance: str = dc_field(default="presented", compare=False)

    def __post_init__(self):
        src = self.source if isinstance(self.source, LineBundleSum) else LineBundleSum(self.n, self.source)
        tgt = self.target if isinstance(self.target, LineBundleSum) else LineBundleSum(self.n, self.target)
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "target", tgt)
        rows = []
        for i, row in enumerate(self.phi):
            row = tuple(row)
            if len(row) != len(src):
                raise ValueError(f"row {i} has {len(row)} entries, expected {len(src)}")
            fixed = []
            for j, f in enumerate(row):
                need = tgt.twists[i] - src.twists[j]
                if isinstance(f, int) and f == 0:
                    f = HomogeneousForm.zero(self.n, max(need, 0))
                if f.n != self.n:
                    raise ValueError(f"entry ({i},{j}) lives on P^{f.n}, not P^{self.n}")
                if not f.is_zero() and f.degree != need:
                    raise ValueError(f"entry ({i},{j}) has degree {f.degree}, expected {need}")
                fixed.append(f)
            rows.append(tuple(fixed))
        if len(rows) != len(tgt):
            raise ValueError(f"phi has {len(rows)} rows for {len(tgt)} target summands")
        object.__setattr__(self, "phi", tuple(rows))
        if self.rank < 1:
            raise ValueError("the cokernel must have positive rank")

    @property
    def rank(self):
        return len(self.target) - len(self.source)

    @property
    def c1(self):
        return sum(self.target.twists) - sum(self.source.twists)

    def twist(self, m):
        if m == 0:
            return self
        return PresentedBundle(
            self.n,
            LineBundleSum(self.n, tuple(a + m for a in self.source.twists)),
            LineBundleSum(self.n, tuple(b + m for b in self.target.twists)),
            self.phi,
            f"twist({self.provenance},m={m})",
        )

    def evaluate(self, point):
        """The scalar matrix phi(P)."""
        return evaluate_grid(self.phi, point)

    def generically_injective(self, tries=4, seed=0, field=QQ):
        s = len(self.source)
        if s == 0:
            return True
        for p in _probe_points(self.n, tries, seed):
            if rank(Matrix(self.evaluate(p), field=field)) == s:
                return True
        return False

    def check_injective(self, tries=4, seed=0):
        if not self.generically_injective(tries, seed):
            raise GenericityError(f"{self.provenance}: phi drops rank at every probed point")
        return self


def make_bundle(n, source, target, phi, provenance="presented", check=True):
    E = PresentedBundle(n, LineBundleSum(n, source), LineBundleSum(n, target), phi, provenance)
    return E.check_injective() if check else E


# ranks of the two maps every cohomology number is read from; cached per
# (bundle, twist, field) since tables and certificates revisit them


@lru_cache(maxsize=8192)
def h0_map_rank(E: PresentedBundle, m: int, field=QQ) -> int:
    """Rank of H^0(A(m)) -> H^0(B(m))."""
    if E.source.h(0, m) == 0 or E.target.h(0, m) == 0:
        return 0
    return rank(block_matrix(E.phi, E.source.twists, E.target.twists, m, field, n=E.n))


@lru_cache(maxsize=8192)
def dual_map_rank(E: PresentedBundle, m: int, field=QQ) -> int:
    """Rank of H^0(B^v(m)) -> H^0(A^v(m)), multiplication by phi^T."""
    B, A = E.target.dual(), E.source.dual()
    if B.h(0, m) == 0 or A.h(0, m) == 0:
        return 0
    return rank(block_matrix(transpose_grid(E.phi), B.twists, A.twists, m, field, n=E.n))


def h0_map(E, m, field=QQ) -> Matrix:
    return block_matrix(E.phi, E.source.twists, E.target.twists, m, field, n=E.n)


def top_map(E, m, field=QQ) -> Matrix:
    """H^n(A(m)) -> H^n(B(m)), realised through Serre duality."""
    B, A = E.target.dual(), E.source.dual()
    return block_matrix(transpose_grid(E.phi), B.twists, A.twists, -m - E.n - 1, field, n=E.n).T


def _all_cohomology(E, m, field):
    n = E.n
    r0 = h0_map_rank(E, m, field)
    if E.source.h(0, m) != r0:
        raise GenericityError(f"{E.provenance}: phi is not injective on H^0 at twist {m}")
    rn = dual_map_rank(E, -m - n - 1, field)
    coker0 = E.target.h(0, m) - r0
    ker_top = E.source.h(n, m) - rn
    coker_top = E.target.h(n, m) - rn
    h = [0] * (n + 1)
    if n == 1:
        h[0] = coker0 + ker_top
        h[1] = coker_top
    else:
        h[0] = coker0
        h[n - 1] = ker_top
        h[n] = coker_top
    return h


def bundle_cohomology(E: PresentedBundle, m: int, i: int, field=QQ) -> int:
    """h^i(E(m)) over ``field``."""
    if not 0 <= i <= E.n:
        raise ValueError(f"cohomological degree {i} outside [0, {E.n}]")
    return _all_cohomology(E, m, field)[i]


def dual_bundle_cohomology(E: PresentedBundle, m: int, i: int, field=QQ) -> int:
    """h^i(E^v(m)) from 0 -> E^v -> B^v -> A^v -> 0.

    Only meaningful when E is locally free; otherwise the dual sequence is
    not exact on the right.
    """
    n = E.n
    if not 0 <= i <= n:
        raise ValueError(f"cohomological degree {i} outside [0, {n}]")
    B, A = E.target.dual(), E.source.dual()
    rd = dual_map_rank(E, m, field)
    ker0 = B.h(0, m) - rd
    coker0 = A.h(0, m) - rd
    # H^n(B^v(m)) -> H^n(A^v(m)) is dual to the H^0 map of E at -m-n-1
    ker_top = B.h(n, m) - h0_map_rank(E, -m - n - 1, field)
    h = [0] * (n + 1)
    if n == 1:
        h[0] = ker0
        h[1] = coker0 + ker_top
    else:
        h[0] = ker0
        h[1] = coker0
        h[n] = ker_top
    return h[i]


def euler_characteristic(E: PresentedBundle, m: int = 0) -> int:
    """chi(E(m)) = chi(B(m)) - chi(A(m))."""
    return E.target.chi(m) - E.source.chi(m)


@dataclass(frozen=True)
class CohomologyTable:
    """h^i(E(m)) for 0 <= i <= n over a window of twists."""

    descriptor: str
    n: int
    m_lo: int
    m_hi: int
    grid: tuple  # grid[i][m - m_lo]
    field: str = "QQ"

    def __getitem__(self, key):
        i, m = key
        if not self.m_lo <= m <= self.m_hi:
            raise KeyError(f"twist {m} outside [{self.m_lo}, {self.m_hi}]")
        return self.grid[i][m - self.m_lo]

    @property
    def twists(self):
        return range(self.m_lo, self.m_hi + 1)

    def row(self, i):
        return self.grid[i]

    def render(self, label="E"):
        """Text table with rows h^n .. h^0 and one column per twist."""
        heads = [f"h^{i}({label}(k))" for i in range(self.n, -1, -1)]
        width = max(len(h) for h in heads + ["k"])
        cells = [str(m) for m in self.twists]
        for i in range(self.n + 1):
            cells += [str(v) for v in self.grid[i]]
        cw = max(len(c) for c in cells)
        lines = ["k".ljust(width) + " | " + " ".join(str(m).rjust(cw) for m in self.twists)]
        lines.append("-" * len(lines[0]))
        for i in range(self.n, -1, -1):
            lines.append(
                heads[self.n - i].ljust(width)
                + " | "
                + " ".join(str(v).rjust(cw) for v in self.grid[i])
            )
        return "\n".join(lines)

    def to_dict(self):
        return {
            "bundle": self.descriptor,
            "n": self.n,
            "field": self.field,
            "window": [self.m_lo, self.m_hi],
            "h": {str(i): list(self.grid[i]) for i in range(self.n + 1)},
        }

    @classmethod
    def from_dict(cls, d):
        n = d["n"]
        return cls(
            d["bundle"], n, d["window"][0], d["window"][1],
            tuple(tuple(d["h"][str(i)]) for i in range(n + 1)), d.get("field", "QQ"),
        )


def cohomology_table(E: PresentedBundle, m_lo: int, m_hi: int, field=QQ) -> CohomologyTable:
    if m_lo > m_hi:
        raise ValueError("empty twist window")
    cols = [_all_cohomology(E, m, field) for m in range(m_lo, m_hi + 1)]
    for m, h in zip(range(m_lo, m_hi + 1), cols):
        alt = sum((-1) ** i * v for i, v in enumerate(h))
        if alt != euler_characteristic(E, m):
            raise InternalConsistencyError(
                f"{E.provenance}: sum (-1)^i h^i(E({m})) = {alt} but chi = {euler_characteristic(E, m)}"
            )
    grid = tuple(tuple(col[i] for col in cols) for i in range(E.n + 1))
    return CohomologyTable(E.provenance, E.n, m_lo, m_hi, grid, field.name)


@dataclass(frozen=True)
class ChernData:
    """Rank and Chern classes of a bundle on P^2, with its Hilbert polynomial.

    ``chi_poly`` holds (a2, a1, a0) with chi(E(m)) = a2*m^2 + a1*m + a0.
    """

    rank: int
    c1: int
    c2: int
    chi_poly: tuple

    def chi(self, m):
        a2, a1, a0 = self.chi_poly
        return _tidy(Fraction(a2) * m * m + a1 * m + a0)


def _series(coeffs_prod, coeffs_div, order=3):
    out = [Fraction(0)] * order
    out[0] = Fraction(1)
    for b in coeffs_prod:
        nxt = [Fraction(0)] * order
        for k in range(order):
            nxt[k] += out[k]
            if k + 1 < order:
                nxt[k + 1] += out[k] * b
        out = nxt
    for a in coeffs_div:
        # multiply by 1/(1 + a h) = sum (-a h)^k
        nxt = [Fraction(0)] * order
        for k in range(order):
            for j in range(order - k):
                nxt[k + j] += out[k] * (-a) ** j
        out = nxt
    return out


def chern_data(E: PresentedBundle) -> ChernData:
    """Whitney formula c(E) = prod(1 + b_i h) / prod(1 + a_j h) mod h^3."""
    if E.n != 2:
        raise UnsupportedDimensionError("Chern data is only implemented on P^2")
    series = _series(E.target.twists, E.source.twists)
    r, c1, c2 = E.rank, int(series[1]), int(series[2])
    # Riemann-Roch on P^2
    chi_poly = (
        Fraction(r, 2),
        Fraction(3 * r, 2) + c1,
        Fraction(c1 * c1, 2) - c2 + Fraction(3 * c1, 2) + r,
    )
    return ChernData(r, c1, c2, tuple(_tidy(x) for x in chi_poly))


def _tidy(x):
    return x.numerator if x.denominator == 1 else x


__all__ = [
    "ChernData",
    "CohomologyTable",
    "GenericityError",
    "InternalConsistencyError",
    "LineBundleSum",
    "PresentedBundle",
    "bundle_cohomology",
    "chern_data",
    "chi_line_bundle",
    "cohomology_table",
    "dual_bundle_cohomology",
    "euler_characteristic",
    "h0_map",
    "line_bundle_cohomology",
    "make_bundle",
    "top_map",
]
