"""
Small exact linear algebra over the rationals.

Matrices are tuples of row tuples; vectors are tuples. Entries are ``int`` or
``fractions.Fraction``. Nothing here ever touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Matrix = tuple[tuple, ...]
Vector = tuple


def to_fraction(x) -> Fraction:
    """Parse ``int``, ``Fraction`` or a ``"p/q"`` string.

    >>> to_fraction("3/6"), to_fraction(-2)
    (Fraction(1, 2), Fraction(-2, 1))
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def normalize(x):
    """Return an ``int`` when the rational is integral, else the Fraction."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def fmt(x) -> str:
    return str(Fraction(x))


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def mat_vec(a: Matrix, v: Sequence) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def dot(v: Sequence, w: Sequence):
    if len(v) != len(w):
        raise ValueError(f"dimension mismatch: {len(v)} != {len(w)}")
    return sum(x * y for x, y in zip(v, w))


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    m = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    return len(rref(rows, ncols if ncols is not None else len(rows[0]))[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : rows @ x = 0}``, one vector per free column."""
    red, pivots = rref(list(rows), ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ValueError("matrix is singular")
    return tuple(tuple(normalize(x) for x in row[n:]) for row in red)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Positive rescaling of a nonzero rational vector to a primitive integer vector.

    >>> primitive([Fraction(1, 2), Fraction(3, 4)])
    (2, 3)
    >>> primitive([-2, 0])
    (-1, 0)
    """
    fr = [Fraction(x) for x in v]
    den = lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def in_span(basis: Sequence[Sequence], v: Sequence) -> bool:
    if not basis:
        return all(x == 0 for x in v)
    n = len(v)
    return rank(list(basis) + [v], n) == rank(basis, n)


def coordinates(basis: Sequence[Sequence], v: Sequence) -> tuple[Fraction, ...]:
    """Coordinates of ``v`` in a linearly independent ``basis``; raises if not in the span."""
    k = len(basis)
    n = len(v)
    # solve sum_k c_k basis_k = v, i.e. columns are basis vectors
    rows = [[basis[j][i] for j in range(k)] + [v[i]] for i in range(n)]
    red, pivots = rref(rows, k + 1)
    if k in pivots:
        raise ValueError("vector not in span")
    if pivots != list(range(k)):
        raise ValueError("basis is not linearly independent")
    return tuple(red[i][k] for i in range(k))
