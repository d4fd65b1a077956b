"""Exact integer and rational linear algebra.

Matrices are lists of lists of Python ints (arbitrary precision), row-major.
Vectors are tuples of ints or Fractions.  Nothing here ever touches floating
point: primitivity and content computations are only meaningful exactly.
"""

from fractions import Fraction
from math import gcd


class NotInLattice(ValueError):
    """Vector has non-integral coordinates relative to a lattice basis."""


# ---------------------------------------------------------------------------
# small matrix/vector helpers


def eye(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def mat_mul(A, B):
    rb = len(B)
    cb = len(B[0]) if rb else 0
    return [
        [sum(row[k] * B[k][j] for k in range(rb)) for j in range(cb)]
        for row in A
    ]


def mat_vec(A, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def transpose(A):
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def is_zero_vector(v):
    return all(a == 0 for a in v)


def vec_gcd(v):
    g = 0
    for a in v:
        g = gcd(g, abs(a))
    return g


def mat_inv(A):
    """Exact inverse of a square matrix via Gauss-Jordan over Fraction.

    Raises ValueError if the matrix is singular.  Entries of the result are
    ints when they happen to be integral (e.g. for unimodular input).
    """
    n = len(A)
    work = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
            for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if work[i][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        p = work[col][col]
        work[col] = [x / p for x in work[col]]
        for i in range(n):
            if i != col and work[i][col] != 0:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[col])]
    out = []
    for i in range(n):
        row = []
        for x in work[i][n:]:
            row.append(int(x) if x.denominator == 1 else x)
        out.append(row)
    return out


def solve_rational(columns, target):
    """Solve sum_i c_i * columns[i] = target over the rationals.

    Returns a tuple of Fractions, or None if the system is inconsistent.
    When the solution is underdetermined an arbitrary consistent one is
    returned (free coefficients set to zero).
    """
    k = len(columns)
    n = len(target)
    aug = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])]
           for i in range(n)]
    pivots = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, n) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][col]
        aug[r] = [x / p for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    for i in range(r, n):
        if aug[i][k] != 0:
            return None
    coeffs = [Fraction(0)] * k
    for i, col in enumerate(pivots):
        coeffs[col] = aug[i][k]
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(M):
    """Diagonalise an integer matrix by unimodular row and column operations.

    Args:
      M: an integer matrix given as a list of rows (may be empty or have
        zero columns).

    Returns:
      A triple (U, D, V) of integer matrices with U * M * V = D, U and V
      unimodular (determinant +-1), D diagonal with non-negative entries
      satisfying the divisibility chain d1 | d2 | ...

    The pivot at each step is an entry of smallest absolute value in the
    remaining block, which keeps intermediate coefficients moderate.
    """
    r = len(M)
    c = len(M[0]) if r else 0
    A = [list(row) for row in M]
    U = eye(r)
    V = eye(c)

    def row_sub(i, k, q):
        A[i] = [a - q * b for a, b in zip(A[i], A[k])]
        U[i] = [a - q * b for a, b in zip(U[i], U[k])]

    def col_sub(j, k, q):
        for row in A:
            row[j] -= q * row[k]
        for row in V:
            row[j] -= q * row[k]

    def row_swap(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def col_swap(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    t = 0
    while t < min(r, c):
        # move a smallest nonzero entry of the remaining block to (t, t)
        piv = None
        for i in range(t, r):
            for j in range(t, c):
                if A[i][j] != 0 and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        if piv[0] != t:
            row_swap(t, piv[0])
        if piv[1] != t:
            col_swap(t, piv[1])

        while True:
            for i in range(t + 1, r):
                while A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    row_sub(i, t, q)
                    if A[i][t] != 0:
                        row_swap(i, t)
            for j in range(t + 1, c):
                while A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    col_sub(j, t, q)
                    if A[t][j] != 0:
                        col_swap(j, t)
            if any(A[i][t] != 0 for i in range(t + 1, r)):
                continue
            # pivot must divide every entry of the remaining block
            bad = None
            p = A[t][t]
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if A[i][j] % p != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_sub(t, bad, -1)

        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1

    return U, A, V


def snf_diagonal(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def kernel_basis(M, cols=None):
    """Basis of the saturated integer kernel {x : M x = 0} of an integer matrix.

    Returns a list of integer vectors of length `cols` (needed when M has no
    rows).  The basis spans all integer solutions because it consists of
    columns of a unimodular matrix.
    """
    r = len(M)
    if r == 0:
        if cols is None:
            raise ValueError("cols required for a matrix with no rows")
        return [tuple(row) for row in eye(cols)]
    c = len(M[0])
    _, D, V = smith_normal_form(M)
    diag = snf_diagonal(D)
    free = [j for j in range(c) if j >= len(diag) or diag[j] == 0]
    return [tuple(V[i][j] for i in range(c)) for j in free]


def solve_integer_combination(generators, target):
    """Integer coefficients c with sum_i c_i * generators[i] = target.

    Generators and target may have rational entries.  Returns a tuple of
    ints, or None when target is not in the integer span.
    """
    g = len(generators)
    if g == 0:
        return () if is_zero_vector(target) else None
    n = len(target)
    denom = 1
    for v in list(generators) + [target]:
        for x in v:
            if isinstance(x, Fraction):
                denom = denom * x.denominator // gcd(denom, x.denominator)
    Mg = [[int(x * denom) for x in v] for v in generators]
    t = [int(x * denom) for x in target]

    U, D, V = smith_normal_form(Mg)
    diag = snf_diagonal(D)
    # row vector equation c * Mg = t  <=>  s * D = t * V with c = s * U
    tv = [sum(t[i] * V[i][j] for i in range(n)) for j in range(n)]
    s = [0] * g
    for j in range(n):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            if tv[j] != 0:
                return None
        else:
            if tv[j] % d != 0:
                return None
            s[j] = tv[j] // d
    c = [sum(s[i] * U[i][j] for i in range(g)) for j in range(g)]
    return tuple(c)


# ---------------------------------------------------------------------------
# lattices


class Lattice:
    """A finitely generated subgroup of a rational vector space.

    The basis vectors are linearly independent over the rationals; they are
    stored as tuples of Fractions.
    """

    def __init__(self, basis, generators=None):
        basis = [tuple(Fraction(x) for x in v) for v in basis]
        if basis:
            dim = len(basis[0])
            if any(len(v) != dim for v in basis):
                raise ValueError("basis vectors of unequal length")
            if _rational_rank(basis) != len(basis):
                raise ValueError("basis vectors are linearly dependent")
        self.basis = basis
        # original (possibly dependent) generators, kept so membership
        # questions can be answered in the caller's coordinates
        if generators is None:
            self.generators = list(basis)
        else:
            self.generators = [tuple(Fraction(x) for x in v)
                               for v in generators]

    @property
    def rank(self):
        return len(self.basis)

    @classmethod
    def from_generators(cls, generators, dim=None):
        """Extract a Z-basis of the span of possibly dependent generators."""
        original = [tuple(Fraction(x) for x in v) for v in generators]
        gens = [v for v in original if not is_zero_vector(v)]
        if not gens:
            return cls([], generators=original)
        n = len(gens[0])
        denom = 1
        for v in gens:
            for x in v:
                denom = denom * x.denominator // gcd(denom, x.denominator)
        Mg = [[int(x * denom) for x in v] for v in gens]
        _, D, V = smith_normal_form(Mg)
        diag = snf_diagonal(D)
        Vinv = mat_inv(V)
        basis = []
        for i, d in enumerate(diag):
            if d != 0:
                basis.append(tuple(Fraction(d * Vinv[i][j], denom) for j in range(n)))
        return cls(basis, generators=original)

    def coordinates(self, v):
        """Rational coordinates of v in the basis, or None if v is outside
        the rational span."""
        if not self.basis:
            return () if is_zero_vector(v) else None
        return solve_rational(self.basis, v)

    def integer_coordinates(self, v):
        coords = self.coordinates(v)
        if coords is None:
            return None
        out = []
        for x in coords:
            if Fraction(x).denominator != 1:
                return None
            out.append(int(x))
        return tuple(out)

    def __contains__(self, v):
        return self.integer_coordinates(v) is not None

    def __repr__(self):
        return f"Lattice({self.basis!r})"


def _rational_rank(vectors):
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        rows[rank] = [x / p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def membership_solve(L, v):
    """Integer coefficients expressing v over L's original generators, or
    None if v is not in the lattice.  Falls back to the reduced basis when
    the lattice was built directly from one."""
    return solve_integer_combination(L.generators, v)


def content_and_primitive_part(v, L):
    """Write v = k * u with u primitive in the lattice L and k >= 0.

    Returns (0, zero vector) for v = 0.  Raises NotInLattice when v has
    non-integral coordinates relative to the basis of L.
    """
    v = tuple(Fraction(x) for x in v)
    coords = L.integer_coordinates(v)
    if coords is None:
        raise NotInLattice(f"{v} is not in the lattice")
    if is_zero_vector(v):
        return 0, tuple(Fraction(0) for _ in v)
    k = vec_gcd(coords)
    u = tuple(x / k for x in v)
    return k, u


# ---------------------------------------------------------------------------
# finitely generated abelian groups


class AbelianPresentation:
    """A finitely generated abelian group Z^rank / (row span of relations).

    Elements are integer coordinate vectors over the formal generators.
    Smith normal form of the relation matrix is computed once and cached; it
    yields the invariant factors, the torsion order and an integer projection
    onto the free part (used to realise the rational quotient space).
    """

    def __init__(self, rank, relations=()):
        self.rank = rank
        self.relations = [tuple(row) for row in relations]
        for row in self.relations:
            if len(row) != rank:
                raise ValueError("relation length does not match rank")
        # relators as columns: the relation lattice is their integer span
        B = [[row[i] for row in self.relations] for i in range(rank)]
        if not self.relations:
            B = [[] for _ in range(rank)]
        U, D, _ = smith_normal_form(B)
        diag = snf_diagonal(D)
        self.snf_diagonal = diag
        self.invariant_factors = [d for d in diag if d not in (0, 1)]
        order = 1
        for d in self.invariant_factors:
            order *= d
        self.torsion_order = order
        self.free_indices = [i for i in range(rank)
                             if i >= len(diag) or diag[i] == 0]
        self.free_rank = len(self.free_indices)
        self._u = U
        self._uinv = mat_inv(U) if rank else []
        # projection to / lift from free coordinates
        self._proj = [U[i] for i in self.free_indices]
        self._lift = [[self._uinv[i][j] for j in self.free_indices]
                      for i in range(rank)]

    def free_coordinates(self, vec):
        """Image of an element in Z^free_rank, killing torsion exactly."""
        return tuple(sum(row[i] * vec[i] for i in range(self.rank))
                     for row in self._proj)

    def lift_free(self, fvec):
        """A preferred ambient representative of a free-coordinate vector."""
        return tuple(sum(row[j] * fvec[j] for j in range(self.free_rank))
                     for row in self._lift)

    def in_relation_lattice(self, vec):
        y = mat_vec(self._u, vec)
        for i in range(self.rank):
            d = self.snf_diagonal[i] if i < len(self.snf_diagonal) else 0
            if d == 0:
                if y[i] != 0:
                    return False
            elif y[i] % d != 0:
                return False
        return True

    def elements_equal(self, x, y):
        return self.in_relation_lattice(vec_sub(x, y))

    def canonical(self, vec):
        """Unique representative of the element modulo the relation lattice."""
        y = list(mat_vec(self._u, vec))
        for i in range(min(self.rank, len(self.snf_diagonal))):
            d = self.snf_diagonal[i]
            if d != 0:
                y[i] %= d
        return mat_vec(self._uinv, y)

    def is_torsion(self, vec):
        return all(x == 0 for x in self.free_coordinates(vec))

    def __repr__(self):
        return (f"AbelianPresentation(rank={self.rank}, "
                f"relations={self.relations!r})")


def torsion_data(P):
    """(torsion order, invariant factors, free rank) of a presented group."""
    return P.torsion_order, list(P.invariant_factors), P.free_rank
