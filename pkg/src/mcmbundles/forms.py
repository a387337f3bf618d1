"""Homogeneous forms on P^n and the matrices of multiplication maps.

Monomials of a fixed degree are ordered lexicographically with
x0 > x1 > ... > xn (graded lex restricted to one degree), so the basis of
degree-2 forms on P^2 is x0^2, x0*x1, x0*x2, x1^2, x1*x2, x2^2.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .linalg import QQ, Matrix, PrimeField, _to_residue


class DegreeMismatchError(ValueError):
    """A form does not have the degree its position requires."""


def dim_forms(n: int, d: int) -> int:
    """Dimension of the space of degree-``d`` forms in n+1 variables."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return comb(d + n, n) if d >= 0 else 0


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def monomial_basis(n: int, d: int) -> tuple:
    """Exponent vectors of degree ``d`` on P^n in the fixed lex order."""
    if d < 0:
        return ()
    return tuple(_compositions(d, n + 1))


@lru_cache(maxsize=None)
def _basis_index(n, d):
    return {e: i for i, e in enumerate(monomial_basis(n, d))}


def _clean(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class HomogeneousForm:
    """A homogeneous polynomial on P^n, stored sparsely by exponent vector.

    The zero form carries a nominal degree but is accepted wherever any
    degree is expected.
    """

    __slots__ = ("n", "degree", "_terms", "_hash")

    def __init__(self, n, degree, coeffs=None):
        if n < 0:
            raise ValueError("n must be non-negative")
        terms = {}
        for exp, c in (coeffs or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n + 1 or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp} on P^{n}")
            if sum(exp) != degree:
                raise DegreeMismatchError(f"monomial {exp} has degree {sum(exp)}, expected {degree}")
            if c != 0:
                terms[exp] = _clean(terms.get(exp, 0) + c)
                if terms[exp] == 0:
                    del terms[exp]
        if degree < 0 and terms:
            raise DegreeMismatchError("nonzero form of negative degree")
        self.n = n
        self.degree = degree
        self._terms = tuple(sorted(terms.items(), reverse=True))
        self._hash = None

    # constructors

    @classmethod
    def zero(cls, n, degree=0):
        return cls(n, degree)

    @classmethod
    def constant(cls, n, c):
        return cls(n, 0, {(0,) * (n + 1): c})

    @classmethod
    def variable(cls, n, i):
        e = [0] * (n + 1)
        e[i] = 1
        return cls(n, 1, {tuple(e): 1})

    @classmethod
    def linear(cls, coefficients):
        """The linear form sum c_i x_i."""
        n = len(coefficients) - 1
        return cls(n, 1, {
            tuple(int(j == i) for j in range(n + 1)): c for i, c in enumerate(coefficients)
        })

    # access

    @property
    def coeffs(self):
        return dict(self._terms)

    def terms(self):
        return self._terms

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, HomogeneousForm):
            if self.n != other.n or self._terms != other._terms:
                return False
            return not self._terms or self.degree == other.degree
        if isinstance(other, (int, Fraction)) and other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self._terms))
        return self._hash

    # arithmetic

    def _check_space(self, other):
        if self.n != other.n:
            raise ValueError(f"forms on P^{self.n} and P^{other.n}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        self._check_space(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise DegreeMismatchError(f"adding degree {self.degree} and {other.degree}")
        c = dict(self._terms)
        for e, v in other._terms:
            c[e] = c.get(e, 0) + v
        return HomogeneousForm(self.n, self.degree, c)

    __radd__ = __add__

    def __neg__(self):
        return HomogeneousForm(self.n, self.degree, {e: -v for e, v in self._terms})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return HomogeneousForm(self.n, self.degree, {e: v * other for e, v in self._terms})
        if not isinstance(other, HomogeneousForm):
            return NotImplemented
        self._check_space(other)
        c = {}
        for e1, v1 in self._terms:
            for e2, v2 in other._terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                c[e] = c.get(e, 0) + v1 * v2
        return HomogeneousForm(self.n, self.degree + other.degree, c)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("forms only take non-negative integer powers")
        out = HomogeneousForm.constant(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, point):
        """Evaluate at a point given by n+1 coordinates."""
        if len(point) != self.n + 1:
            raise ValueError(f"point {point} does not lie in P^{self.n}")
        total = 0
        for e, v in self._terms:
            t = v
            for x, k in zip(point, e):
                if k:
                    t = t * x**k
            total = total + t
        return total

    def substitute(self, linear_forms):
        """Compose with n+1 forms of equal degree on another projective space."""
        if len(linear_forms) != self.n + 1:
            raise ValueError("need one substitution per variable")
        m = linear_forms[0].n
        deg = linear_forms[0].degree
        out = HomogeneousForm.zero(m, self.degree * deg)
        powers = [{0: HomogeneousForm.constant(m, 1)} for _ in linear_forms]
        for e, v in self._terms:
            t = HomogeneousForm.constant(m, v)
            for i, k in enumerate(e):
                if k:
                    if k not in powers[i]:
                        powers[i][k] = linear_forms[i] ** k
                    t = t * powers[i][k]
            out = out + t
        return out

    def coefficient_vector(self):
        """Coefficients in the fixed monomial basis of its degree."""
        idx = _basis_index(self.n, self.degree)
        v = [0] * len(idx)
        for e, c in self._terms:
            v[idx[e]] = c
        return v

    def __repr__(self):
        return f"HomogeneousForm(n={self.n}, degree={self.degree}, {self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms:
            mono = "*".join(
                f"x{i}" if k == 1 else f"x{i}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")


def random_form(n, degree, rng, lo=-9, hi=9):
    """A form whose coefficients are uniform integers in [lo, hi]."""
    if degree < 0:
        return HomogeneousForm.zero(n, 0)
    return HomogeneousForm(n, degree, {e: rng.randint(lo, hi) for e in monomial_basis(n, degree)})


class _FormBuilder(ast.NodeVisitor):
    def __init__(self, n):
        self.n = n

    def visit_Expression(self, node):
        return self.visit(node.body)

    def visit_Constant(self, node):
        if isinstance(node.value, int) and not isinstance(node.value, bool):
            return node.value
        raise ValueError(f"unsupported literal {node.value!r}")

    def visit_Name(self, node):
        name = node.id
        if name.startswith("x") and name[1:].isdigit():
            i = int(name[1:])
            if i > self.n:
                raise ValueError(f"variable {name} does not exist on P^{self.n}")
            return HomogeneousForm.variable(self.n, i)
        raise ValueError(f"unknown variable {name!r}")

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        raise ValueError("unsupported unary operator")

    def visit_BinOp(self, node):
        left = self.visit(node.left)
        right = self.visit(node.right)
        op = node.op
        if isinstance(op, ast.Pow):
            if not isinstance(right, int):
                raise ValueError("exponents must be integer literals")
            return left ** right
        if isinstance(op, (ast.Add, ast.Sub)):
            left, right = _as_form(left, self.n), _as_form(right, self.n)
            return left + right if isinstance(op, ast.Add) else left - right
        if isinstance(op, ast.Mult):
            return left * right
        raise ValueError("only +, -, * and ^ are allowed")

    def generic_visit(self, node):
        raise ValueError(f"unsupported syntax: {type(node).__name__}")


def _as_form(v, n):
    return HomogeneousForm.constant(n, v) if isinstance(v, int) else v


def parse_form(text: str, n: int, degree=None) -> HomogeneousForm:
    """Parse an integer-coefficient polynomial such as ``"x0 + 2*x1^2"``.

    ``^`` and ``**`` both denote powers.  When ``degree`` is given, the
    parsed form must be homogeneous of that degree (or zero).
    """
    tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
    f = _as_form(_FormBuilder(n).visit(tree), n)
    if degree is not None and not f.is_zero() and f.degree != degree:
        raise DegreeMismatchError(f"{text!r} has degree {f.degree}, expected {degree}")
    if degree is not None and f.is_zero():
        f = HomogeneousForm.zero(n, max(degree, 0))
    return f


def _mult_array(f, d):
    n = f.n
    src = monomial_basis(n, d)
    tgt = _basis_index(n, d + f.degree)
    a = np.empty((len(tgt), len(src)), dtype=object)
    a.fill(0)
    for j, m in enumerate(src):
        for e, c in f.terms():
            a[tgt[tuple(x + y for x, y in zip(m, e))], j] += c
    return a


def _finish(a, field):
    if isinstance(field, PrimeField):
        p = field.p
        out = np.array([[_to_residue(x, p) for x in row] for row in a], dtype=np.int64)
        return Matrix._wrap(out.reshape(a.shape), field)
    return Matrix._wrap(a, field)


def multiplication_matrix(f: HomogeneousForm, d: int, degree=None, field=QQ) -> Matrix:
    """Matrix of multiplication by ``f`` from degree-``d`` to degree-``d+e`` forms.

    ``degree`` is the declared degree e of ``f``; a nonzero ``f`` of another
    degree is rejected.  Negative source or target degrees give empty
    matrices of the right shape.
    """
    e = f.degree if degree is None else degree
    if not f.is_zero() and f.degree != e:
        raise DegreeMismatchError(f"form of degree {f.degree} declared as degree {e}")
    n = f.n
    rows, cols = dim_forms(n, d + e), dim_forms(n, d)
    if f.is_zero() or rows == 0 or cols == 0:
        return Matrix.zeros(rows, cols, field)
    return _finish(_mult_array(f, d), field)


def block_matrix(phi, source_twists, target_twists, m, field=QQ, n=None) -> Matrix:
    """The map on global sections induced by a matrix of forms.

    ``phi[i][j]`` maps O(a_j) to O(b_i), so it must have degree b_i - a_j
    (or be zero).  The result represents
    H^0(sum_j O(a_j + m)) -> H^0(sum_i O(b_i + m)).
    """
    if n is None:
        n = next((f.n for row in phi for f in row), None)
        if n is None:
            raise ValueError("cannot infer n from an empty matrix; pass n=")
    if len(phi) != len(target_twists) or any(len(row) != len(source_twists) for row in phi):
        raise ValueError("phi shape does not match the twist lists")
    col_dims = [dim_forms(n, a + m) for a in source_twists]
    row_dims = [dim_forms(n, b + m) for b in target_twists]
    col_off = np.concatenate([[0], np.cumsum(col_dims)]).astype(int)
    row_off = np.concatenate([[0], np.cumsum(row_dims)]).astype(int)
    out = np.empty((int(row_off[-1]), int(col_off[-1])), dtype=object)
    out.fill(0)
    for i, b in enumerate(target_twists):
        for j, a in enumerate(source_twists):
            f = phi[i][j]
            if not f.is_zero() and f.degree != b - a:
                raise DegreeMismatchError(
                    f"entry ({i},{j}) has degree {f.degree}, expected {b - a}"
                )
            if f.is_zero() or row_dims[i] == 0 or col_dims[j] == 0:
                continue
            out[row_off[i]:row_off[i + 1], col_off[j]:col_off[j + 1]] = _mult_array(f, a + m)
    return _finish(out, field)


def transpose_grid(phi):
    if not phi:
        return ()
    return tuple(tuple(row[j] for row in phi) for j in range(len(phi[0])))


def form_determinant(grid):
    """Determinant of a square matrix of forms by cofactor expansion."""
    size = len(grid)
    if size == 0:
        raise ValueError("empty determinant")
    if size == 1:
        return grid[0][0]
    total = 0
    for j in range(size):
        entry = grid[0][j]
        if entry.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in grid[1:]]
        term = entry * form_determinant(minor)
        total = total + (term if j % 2 == 0 else -term)
    if isinstance(total, int):
        # every expansion term vanished; any degree label will do
        n = grid[0][0].n
        return HomogeneousForm.zero(n, 0)
    return total


__all__ = [
    "DegreeMismatchError",
    "HomogeneousForm",
    "block_matrix",
    "dim_forms",
    "form_determinant",
    "monomial_basis",
    "multiplication_matrix",
    "parse_form",
    "random_form",
    "transpose_grid",
]
