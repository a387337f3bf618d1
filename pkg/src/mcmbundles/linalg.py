"""Exact dense linear algebra over the rationals and over prime fields.

Matrices over QQ hold Python ints / Fractions in an object array and are
reduced with fraction-free (Bareiss) elimination.  Matrices over GF(p) hold
residues in an int64 array; for p < 2**31 every product fits in 63 bits, so
elimination is fully vectorised.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import isprime, nextprime


class FieldMismatchError(ValueError):
    """Entries or operands belong to different fields."""


class Rationals:
    name = "QQ"
    probabilistic = False

    def __repr__(self):
        return "QQ"

    def __reduce__(self):
        return "QQ"


QQ = Rationals()


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if self.p < 3 or not isprime(self.p):
            raise ValueError(f"GF(p) needs an odd prime, got {self.p}")

    probabilistic = True

    @property
    def name(self):
        return f"GF({self.p})"

    def __repr__(self):
        return self.name


def random_prime(seed=None):
    """A prime in (2**30, 2**31), drawn from ``seed``."""
    rng = random.Random(seed)
    return nextprime(2**30 + rng.randrange(2**30 - 2**20))


def parse_field(text, seed=None):
    """Parse ``QQ``/``rationals`` or ``GF(p)``/``p=NNN``/``NNN`` into a field.

    ``prime`` (or ``gf``) picks a prime above 2**30 from ``seed``.
    """
    t = str(text).strip()
    if t.lower() in ("qq", "q", "rationals", "rational"):
        return QQ
    if t.lower() in ("gf", "prime", "fp"):
        return PrimeField(random_prime(seed))
    for prefix in ("GF(", "gf(", "F_(", "Fp("):
        if t.startswith(prefix) and t.endswith(")"):
            t = t[len(prefix):-1]
            break
    if t.lower().startswith("p="):
        t = t[2:]
    try:
        return PrimeField(int(t))
    except ValueError as exc:
        raise ValueError(f"unrecognised field {text!r}") from exc


def field_from_name(name):
    return parse_field(name)


@dataclass(frozen=True)
class Residue:
    """An element of GF(p), stored in [0, p)."""

    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _other(self, other):
        if isinstance(other, Residue):
            if other.p != self.p:
                raise FieldMismatchError(f"GF({self.p}) vs GF({other.p})")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            raise FieldMismatchError(f"GF({self.p}) vs QQ")
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Residue(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Residue(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Residue(o - self.value, self.p)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Residue(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.p)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return Residue(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self * Residue(o, self.p).inverse()

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


@lru_cache(maxsize=None)
def _prime_field(p):
    return PrimeField(p)


def _infer_field(flat):
    field = None
    for x in flat:
        if isinstance(x, Residue):
            f = _prime_field(x.p)
        elif isinstance(x, Fraction):
            f = QQ
        elif isinstance(x, (int, np.integer)):
            continue
        else:
            raise TypeError(f"unsupported matrix entry {x!r}")
        if field is None:
            field = f
        elif field != f:
            raise FieldMismatchError("matrix mixes entries from different fields")
    return field or QQ


def _to_residue(x, p):
    if isinstance(x, Residue):
        return x.value
    if isinstance(x, Fraction):
        if x.denominator % p == 0:
            raise ZeroDivisionError(f"denominator {x.denominator} vanishes mod {p}")
        return x.numerator * pow(x.denominator, -1, p) % p
    return int(x) % p


class Matrix:
    """An immutable dense matrix over QQ or GF(p)."""

    __slots__ = ("_a", "field")

    def __init__(self, entries, field=None, rows=None, cols=None):
        if isinstance(entries, Matrix):
            if field is not None and field != entries.field:
                raise FieldMismatchError(f"{entries.field} vs {field}")
            a, field = entries._a, entries.field
        else:
            a = np.array(entries, dtype=object)
            if a.size == 0:
                r = rows if rows is not None else (a.shape[0] if a.ndim >= 1 else 0)
                c = cols if cols is not None else (a.shape[1] if a.ndim == 2 else 0)
                a = np.zeros((r, c), dtype=object)
            if a.ndim != 2:
                raise ValueError("matrix entries must form a 2-d grid")
            inferred = _infer_field(a.flat)
            if field is None:
                field = inferred
            elif inferred is not QQ and inferred != field:
                raise FieldMismatchError(f"{inferred} entries in a {field} matrix")
            if isinstance(field, PrimeField):
                # plain rationals reduce into GF(p) when the denominator is a unit
                p = field.p
                a = np.array(
                    [[_to_residue(x, p) for x in row] for row in a], dtype=np.int64
                ).reshape(a.shape)
            else:
                a = np.array(
                    [[x.value if isinstance(x, Residue) else _normalize_q(x) for x in row] for row in a],
                    dtype=object,
                ).reshape(a.shape)
        a = a.copy()
        a.flags.writeable = False
        self._a = a
        self.field = field

    @classmethod
    def _wrap(cls, a, field):
        m = cls.__new__(cls)
        a.flags.writeable = False
        m._a = a
        m.field = field
        return m

    @classmethod
    def zeros(cls, rows, cols, field=QQ):
        if isinstance(field, PrimeField):
            return cls._wrap(np.zeros((rows, cols), dtype=np.int64), field)
        a = np.empty((rows, cols), dtype=object)
        a.fill(0)
        return cls._wrap(a, field)

    @classmethod
    def identity(cls, size, field=QQ):
        a = cls.zeros(size, size, field)._a.copy()
        for i in range(size):
            a[i, i] = 1
        return cls._wrap(a, field)

    @property
    def shape(self):
        return self._a.shape

    @property
    def rows(self):
        return self._a.shape[0]

    @property
    def cols(self):
        return self._a.shape[1]

    @property
    def array(self):
        """A read-only view of the underlying entries."""
        return self._a

    @property
    def T(self):
        return Matrix._wrap(self._a.T.copy(), self.field)

    def __getitem__(self, idx):
        x = self._a[idx]
        if isinstance(self.field, PrimeField) and np.isscalar(x):
            return Residue(int(x), self.field.p)
        return x

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} @ {other.field}")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if isinstance(self.field, PrimeField):
            p = self.field.p
            # int64 products overflow on long inner dimensions; go through objects
            prod = (self._a.astype(object) @ other._a.astype(object)) % p
            return Matrix._wrap(prod.astype(np.int64), self.field)
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Matrix.zeros(self.rows, other.cols, self.field)
        return Matrix._wrap(np.array(self._a.dot(other._a), dtype=object), self.field)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self._a == other._a))
        )

    def __hash__(self):
        return hash((self.field, self.shape, tuple(self._a.flat)))

    def tolist(self):
        return self._a.tolist()

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} over {self.field})"


def _normalize_q(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    return int(x)


def _integer_rows(a):
    """Scale each row of a QQ object array to clear denominators."""
    out = np.empty(a.shape, dtype=object)
    for i, row in enumerate(a):
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // math.gcd(den, x.denominator)
        out[i] = [int(x * den) for x in row] if den != 1 else [int(x) for x in row]
    return out


def _strip_zero_lines(a):
    if a.size == 0:
        return a
    nz = a != 0
    return a[np.any(nz, axis=1)][:, np.any(nz, axis=0)]


def _rank_mod_p(a, p):
    """Rank of an int64 array (entries already in [0, p)) over GF(p)."""
    a = a.copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = a[r, c:] * inv % p
        below = a[r + 1:, c].copy()
        rows_hit = np.flatnonzero(below)
        if rows_hit.size:
            idx = r + 1 + rows_hit
            a[idx, c:] = (a[idx, c:] - np.outer(below[rows_hit], a[r, c:]) % p) % p
        r += 1
    return r


def _bareiss(a, want_det=False):
    """Fraction-free elimination of an integer object array.

    Returns the rank, and with ``want_det`` the determinant of a square input.
    """
    a = a.copy()
    rows, cols = a.shape
    prev = 1
    r = 0
    sign = 1
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            if want_det:
                return r, 0
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
            sign = -sign
        p = a[r, c]
        if r + 1 < rows and c + 1 < cols:
            a[r + 1:, c + 1:] = (
                p * a[r + 1:, c + 1:] - np.outer(a[r + 1:, c], a[r, c + 1:])
            ) // prev
        a[r + 1:, c] = 0
        prev = p
        r += 1
    if want_det:
        return r, sign * prev if r == rows == cols else 0
    return r


# Mersenne prime used for the certified full-rank shortcut over QQ.
_SHORTCUT_PRIME = 2**31 - 1


def _rank_rational(a):
    a = _strip_zero_lines(_integer_rows(a))
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        return 0
    if rows < cols:
        a = a.T
        rows, cols = cols, rows
    # rank mod p never exceeds the rational rank, so hitting the maximum is a proof
    mod = np.array([[x % _SHORTCUT_PRIME for x in row] for row in a], dtype=np.int64)
    if _rank_mod_p(mod, _SHORTCUT_PRIME) == cols:
        return cols
    return _bareiss(a)


def rank(m: Matrix) -> int:
    """Exact rank of ``m`` over its field."""
    if not isinstance(m, Matrix):
        m = Matrix(m)
    if m.rows == 0 or m.cols == 0:
        return 0
    if isinstance(m.field, PrimeField):
        return _rank_mod_p(_strip_zero_lines(m.array), m.field.p)
    return _rank_rational(m.array)


def kernel_dim(m: Matrix) -> int:
    if not isinstance(m, Matrix):
        m = Matrix(m)
    return m.cols - rank(m)


def cokernel_dim(m: Matrix) -> int:
    if not isinstance(m, Matrix):
        m = Matrix(m)
    return m.rows - rank(m)


def determinant(m: Matrix):
    """Exact determinant of a square matrix (an int/Fraction, or a Residue)."""
    if not isinstance(m, Matrix):
        m = Matrix(m)
    if m.rows != m.cols:
        raise ValueError(f"determinant of a non-square {m.shape} matrix")
    if m.rows == 0:
        return Residue(1, m.field.p) if isinstance(m.field, PrimeField) else 1
    if isinstance(m.field, PrimeField):
        p = m.field.p
        a = m.array.astype(object)
        _, det = _bareiss(a, want_det=True)
        return Residue(det, p)
    a = m.array
    scale = 1
    for row in a:
        for x in row:
            if isinstance(x, Fraction):
                scale = scale * x.denominator // math.gcd(scale, x.denominator)
    ints = np.array([[int(x * scale) for x in row] for row in a], dtype=object)
    _, det = _bareiss(ints, want_det=True)
    return _normalize_q(Fraction(det, scale ** m.rows))
