"""Small dense complex linear solvers.

Two independent routes are provided on purpose: Gaussian elimination
with partial pivoting (any size) and Cramer's rule (3x3 only).  The
tone-stack model solves with elimination; Cramer exists to cross-check
it, so neither may be rewritten in terms of the other.
"""

from __future__ import annotations

import math

Matrix = list[list[complex]]
Vector = list[complex]

# A pivot (or determinant scale) below this fraction of the largest
# initial entry is treated as numerically singular.
_SINGULAR_RATIO = 1e-300


class LinalgError(Exception):
    pass


class SingularMatrixError(LinalgError):
    pass


class DimensionMismatchError(LinalgError):
    pass


def _check_square(z: Matrix, v: Vector) -> int:
    n = len(z)
    if any(len(row) != n for row in z):
        raise DimensionMismatchError("matrix is not square")
    if len(v) != n:
        raise DimensionMismatchError(
            f"matrix is {n}x{n} but right-hand side has length {len(v)}"
        )
    return n


def _max_modulus(z: Matrix) -> float:
    return max((abs(e) for row in z for e in row), default=0.0)


def solve_elimination(z: Matrix, v: Vector) -> Vector:
    """Solve Z.x = v by Gaussian elimination, pivoting on largest modulus."""
    n = _check_square(z, v)
    a = [list(row) for row in z]
    x = list(v)
    threshold = _SINGULAR_RATIO * _max_modulus(a)

    for col in range(n):
        pivot_row = max(range(col, n), key=lambda r: abs(a[r][col]))
        if abs(a[pivot_row][col]) <= threshold:
            raise SingularMatrixError(f"pivot {col} below threshold {threshold:g}")
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            x[col], x[pivot_row] = x[pivot_row], x[col]
        for row in range(col + 1, n):
            factor = a[row][col] / a[col][col]
            if factor == 0:
                continue
            for k in range(col, n):
                a[row][k] -= factor * a[col][k]
            x[row] -= factor * x[col]

    for row in range(n - 1, -1, -1):
        acc = x[row]
        for k in range(row + 1, n):
            acc -= a[row][k] * x[k]
        x[row] = acc / a[row][row]
    return x


def _det3(m: Matrix) -> complex:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def solve_cramer3(z: Matrix, v: Vector) -> Vector:
    """Solve a 3x3 system by Cramer's rule with explicit determinants."""
    n = _check_square(z, v)
    if n != 3:
        raise DimensionMismatchError(f"Cramer solver handles 3x3 only, got {n}x{n}")
    det = _det3(z)
    scale = _max_modulus(z)
    if abs(det) <= _SINGULAR_RATIO * scale**3:
        raise SingularMatrixError(f"determinant modulus {abs(det):g} below threshold")

    out: Vector = []
    for col in range(3):
        replaced = [
            [v[row] if k == col else z[row][k] for k in range(3)] for row in range(3)
        ]
        out.append(_det3(replaced) / det)
    return out


def residual(z: Matrix, i: Vector, v: Vector) -> float:
    """Relative residual ||Z.i - v||_2 / ||v||_2."""
    n = _check_square(z, v)
    if len(i) != n:
        raise DimensionMismatchError(
            f"matrix is {n}x{n} but solution vector has length {len(i)}"
        )
    num = 0.0
    den = 0.0
    for row in range(n):
        acc = -v[row]
        for k in range(n):
            acc += z[row][k] * i[k]
        num += acc.real * acc.real + acc.imag * acc.imag
        den += v[row].real * v[row].real + v[row].imag * v[row].imag
    if den == 0.0:
        raise ValueError("right-hand side is zero; relative residual undefined")
    return math.sqrt(num / den)
