"""Exact linear algebra over the rationals and the integers.

Scalars are :class:`fractions.Fraction`. Elimination is delegated to sympy's
``DomainMatrix`` over ``QQ``; determinants of integer matrices use the ``ZZ``
domain, whose determinant is the fraction-free Bareiss algorithm. Matrices are
plain lists of rows.
"""
import logging
from fractions import Fraction
from itertools import combinations

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)


def _qq(x):
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def _from_domain(x):
    return Fraction(int(x.numerator), int(x.denominator))


def _from_sympy(x):
    return Fraction(int(x.p), int(x.q))


def qq_matrix(rows, ncols):
    return DomainMatrix([[_qq(x) for x in row] for row in rows], (len(rows), ncols), QQ)


def rref(rows, ncols):
    """Nonzero rows of the reduced row echelon form of ``rows``, and the pivot columns."""
    if not rows or ncols == 0:
        return [], ()
    reduced, pivots = qq_matrix(rows, ncols).rref()
    dense = reduced.to_Matrix()
    return (
        [[_from_sympy(dense[i, j]) for j in range(ncols)] for i in range(len(pivots))],
        tuple(pivots),
    )


def rank(rows, ncols):
    if not rows or ncols == 0:
        return 0
    return qq_matrix(rows, ncols).rank()


def kernel(rows, ncols):
    """Basis of ``{x : rows * x = 0}``, one vector per free column."""
    reduced, pivots = rref(rows, ncols)
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        vector = [Fraction(0)] * ncols
        vector[free] = Fraction(1)
        for i, pivot in enumerate(pivots):
            vector[pivot] = -reduced[i][free]
        basis.append(vector)
    return basis


def solve(rows, ncols, rhs):
    """One solution of ``rows * x = rhs`` or ``None`` when the system is inconsistent."""
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented, ncols + 1)
    if ncols in pivots:
        return None
    solution = [Fraction(0)] * ncols
    for i, pivot in enumerate(pivots):
        solution[pivot] = reduced[i][ncols]
    return solution


def coordinates(basis, pivots, vector):
    """Coordinates of ``vector`` in a basis given as reduced row echelon rows.

    Raises ``ValueError`` when the vector is not in the span.
    """
    coords = [Fraction(vector[p]) for p in pivots]
    rebuilt = combine(basis, coords, len(vector))
    if any(Fraction(a) != b for a, b in zip(vector, rebuilt)):
        raise ValueError('vector is not in the span of the basis')
    return coords


def combine(vectors, coefficients, length):
    total = [Fraction(0)] * length
    for vector, c in zip(vectors, coefficients):
        if c:
            for i, x in enumerate(vector):
                if x:
                    total[i] += c * x
    return total


def dot(u, v):
    return sum((Fraction(a) * b for a, b in zip(u, v) if a and b), Fraction(0))


def transpose(rows, ncols):
    return [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]


def mat_mul(a, b, inner, ncols):
    """Product of an (m x inner) and an (inner x ncols) matrix."""
    return [
        [sum((row[k] * b[k][j] for k in range(inner) if row[k] and b[k][j]), Fraction(0))
         for j in range(ncols)]
        for row in a
    ]


def mat_vec(a, v):
    return [dot(row, v) for row in a]


def determinant(rows):
    if not rows:
        return 1
    size = len(rows)
    if all(Fraction(x).denominator == 1 for row in rows for x in row):
        matrix = DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (size, size), ZZ)
        return int(matrix.det())
    return _from_domain(qq_matrix(rows, size).det())


def exterior_basis(r, p):
    """Index tuples of the lexicographic basis of the p-th exterior power of Q^r."""
    return list(combinations(range(r), p))


def wedge(vectors, r):
    """Coordinates of ``v_1 ^ ... ^ v_p`` in the lexicographic basis of the p-th exterior power."""
    p = len(vectors)
    return [
        determinant([[vectors[c][i] for c in range(p)] for i in index])
        for index in combinations(range(r), p)
    ]


def compound(matrix, m, r, p):
    """Matrix of the p-th exterior power of the linear map ``matrix: Q^r -> Q^m``."""
    columns = list(combinations(range(r), p))
    return [
        [determinant([[matrix[i][j] for j in col] for i in row]) for col in columns]
        for row in combinations(range(m), p)
    ]


def leading_minors_positive(form):
    """Sylvester's criterion: a symmetric form is positive definite iff its leading minors are."""
    return all(
        determinant([row[:size] for row in form[:size]]) > 0
        for size in range(1, len(form) + 1)
    )


def hermite_transform(columns, n):
    """Integer row reduction of the n x k matrix whose columns are ``columns``.

    Returns ``(T, T_inv, H, pivots)`` with ``T`` unimodular, ``T * G = H`` in row
    Hermite form and ``pivots`` the number of nonzero rows of ``H``. The diagonal
    entries of ``H`` are positive and their product is the gcd of the maximal
    minors of ``G`` when the columns are independent.
    """
    k = len(columns)
    h = [[int(columns[j][i]) for j in range(k)] for i in range(n)]
    t = [[int(i == j) for j in range(n)] for i in range(n)]
    t_inv = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap(i, j):
        h[i], h[j] = h[j], h[i]
        t[i], t[j] = t[j], t[i]
        for row in t_inv:
            row[i], row[j] = row[j], row[i]

    def subtract(i, j, q):
        # row_i -= q * row_j
        h[i] = [a - q * b for a, b in zip(h[i], h[j])]
        t[i] = [a - q * b for a, b in zip(t[i], t[j])]
        for row in t_inv:
            row[j] += q * row[i]

    row = 0
    for col in range(k):
        if row == n:
            break
        while True:
            candidates = [i for i in range(row, n) if h[i][col] != 0]
            if not candidates:
                break
            swap(row, min(candidates, key=lambda i: (abs(h[i][col]), i)))
            finished = True
            for i in range(row + 1, n):
                if h[i][col]:
                    subtract(i, row, h[i][col] // h[row][col])
                    finished = finished and h[i][col] == 0
            if finished:
                break
        if h[row][col] == 0:
            continue
        if h[row][col] < 0:
            h[row] = [-a for a in h[row]]
            t[row] = [-a for a in t[row]]
            for r in t_inv:
                r[row] = -r[row]
        for i in range(row):
            if h[i][col]:
                subtract(i, row, h[i][col] // h[row][col])
        row += 1
    return t, t_inv, h, row


def is_feasible(nvars, equalities=(), inequalities=()):
    """Decide exactly whether a system of linear constraints has a rational solution.

    ``equalities`` holds pairs ``(coeffs, rhs)`` meaning ``coeffs . x = rhs``;
    ``inequalities`` holds triples ``(coeffs, rhs, strict)`` meaning
    ``coeffs . x > rhs`` when strict and ``>=`` otherwise. Equalities are solved
    first, the remaining variables are removed by Fourier-Motzkin elimination.
    """
    system = [([Fraction(c) for c in coeffs], Fraction(rhs), strict)
              for coeffs, rhs, strict in inequalities]
    if equalities:
        rows = [list(coeffs) for coeffs, _ in equalities]
        particular = solve(rows, nvars, [rhs for _, rhs in equalities])
        if particular is None:
            return False
        directions = kernel(rows, nvars)
        system = [
            ([dot(coeffs, d) for d in directions], rhs - dot(coeffs, particular), strict)
            for coeffs, rhs, strict in system
        ]
        nvars = len(directions)
    return _fourier_motzkin(system, nvars)


def _fourier_motzkin(system, nvars):
    for var in reversed(range(nvars)):
        lower, upper, rest = [], [], []
        for constraint in system:
            c = constraint[0][var]
            (lower if c > 0 else upper if c < 0 else rest).append(constraint)
        for a, b, s in lower:
            for a2, b2, s2 in upper:
                p, q = a[var], -a2[var]
                rest.append(([x / p + y / q for x, y in zip(a, a2)], b / p + b2 / q, s or s2))
        system = _prune(rest)
        if system is None:
            return False
    return all(rhs < 0 if strict else rhs <= 0 for _, rhs, strict in system)


def _prune(system):
    """Normalise and deduplicate constraints; ``None`` if one is already violated."""
    seen = {}
    for coeffs, rhs, strict in system:
        scale = next((abs(c) for c in coeffs if c), None)
        if scale is None:
            if (rhs >= 0) if strict else (rhs > 0):
                return None
            continue
        key = (tuple(c / scale for c in coeffs), rhs / scale)
        seen[key] = seen.get(key, False) or strict
    return [(list(coeffs), rhs, strict) for (coeffs, rhs), strict in seen.items()]
