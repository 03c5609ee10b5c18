"""Deterministic exact linear algebra: matrices, reduced echelon subspaces,
solving, and inversion over Q and F_p.

Pivoting is always the first nonzero entry in column order, so every basis
produced here is canonical and runs are reproducible. All values are
immutable after construction.
"""

from __future__ import annotations

from . import config
from .errors import InputError, SingularMatrixError


class Matrix:
    """Immutable n x n matrix over an exact field."""

    __slots__ = ("field", "n", "rows", "_hash")

    def __init__(self, field, rows):
        rows = tuple(tuple(field.coerce(x) for x in r) for r in rows)
        n = len(rows)
        if n < 1 or n > config.MAX_DEGREE:
            raise InputError(
                f"matrix degree must be in [1, {config.MAX_DEGREE}], got {n}"
            )
        for r in rows:
            if len(r) != n:
                raise InputError("matrix rows must all have length n")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls, field, n):
        one, zero = field.one, field.zero
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, field, n):
        z = field.zero
        return cls(field, [[z] * n for _ in range(n)])

    @classmethod
    def unit(cls, field, n, i, j):
        """Matrix unit with a single 1 at row i, column j (0-based)."""
        rows = [[field.zero] * n for _ in range(n)]
        rows[i][j] = field.one
        return cls(field, rows)

    @classmethod
    def from_flat(cls, field, n, flat):
        flat = tuple(flat)
        if len(flat) != n * n:
            raise InputError("flat entry vector has wrong length")
        return cls(field, [flat[i * n : (i + 1) * n] for i in range(n)])

    # -- basics --------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.field, self.rows)))
        return self._hash

    def __repr__(self):
        f = self.field.format
        body = "; ".join(" ".join(f(x) for x in r) for r in self.rows)
        return f"Matrix({self.field.name}, [{body}])"

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def flatten(self):
        return tuple(x for row in self.rows for x in row)

    def _compat(self, other):
        if not isinstance(other, Matrix):
            raise InputError("expected a Matrix")
        if other.field != self.field or other.n != self.n:
            raise InputError("matrices must share one field and one degree")

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        self._compat(other)
        add = self.field.add
        return Matrix(
            self.field,
            [
                [add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
        )

    def __sub__(self, other):
        self._compat(other)
        sub = self.field.sub
        return Matrix(
            self.field,
            [
                [sub(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
        )

    def __neg__(self):
        neg = self.field.neg
        return Matrix(self.field, [[neg(a) for a in r] for r in self.rows])

    def __mul__(self, other):
        self._compat(other)
        fld = self.field
        add, mul, zero = fld.add, fld.mul, fld.zero
        n = self.n
        bcols = list(zip(*other.rows))
        out = []
        for ra in self.rows:
            row = []
            for cb in bcols:
                s = zero
                for a, b in zip(ra, cb):
                    s = add(s, mul(a, b))
                row.append(s)
            out.append(row)
        return Matrix(fld, out)

    def scale(self, c):
        mul = self.field.mul
        return Matrix(self.field, [[mul(c, a) for a in r] for r in self.rows])

    def apply(self, vec):
        """Matrix-vector product."""
        if len(vec) != self.n:
            raise InputError("vector length must equal the degree")
        fld = self.field
        out = []
        for row in self.rows:
            s = fld.zero
            for a, v in zip(row, vec):
                s = fld.add(s, fld.mul(a, v))
            out.append(s)
        return tuple(out)

    def trace(self):
        fld = self.field
        t = fld.zero
        for i in range(self.n):
            t = fld.add(t, self.rows[i][i])
        return t

    def det(self):
        fld = self.field
        n = self.n
        rows = [list(r) for r in self.rows]
        det = fld.one
        for col in range(n):
            piv = None
            for r in range(col, n):
                if rows[r][col] != fld.zero:
                    piv = r
                    break
            if piv is None:
                return fld.zero
            if piv != col:
                rows[col], rows[piv] = rows[piv], rows[col]
                det = fld.neg(det)
            det = fld.mul(det, rows[col][col])
            inv = fld.inv(rows[col][col])
            for r in range(col + 1, n):
                if rows[r][col] == fld.zero:
                    continue
                factor = fld.mul(rows[r][col], inv)
                rows[r] = [
                    fld.sub(x, fld.mul(factor, y))
                    for x, y in zip(rows[r], rows[col])
                ]
        return det

    def inverse(self):
        """Gauss-Jordan inverse; raises SingularMatrixError when det = 0."""
        fld = self.field
        n = self.n
        aug = [list(r) + [fld.one if i == j else fld.zero for j in range(n)]
               for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = None
            for r in range(col, n):
                if aug[r][col] != fld.zero:
                    piv = r
                    break
            if piv is None:
                raise SingularMatrixError("matrix is singular")
            if piv != col:
                aug[col], aug[piv] = aug[piv], aug[col]
            inv = fld.inv(aug[col][col])
            aug[col] = [fld.mul(inv, x) for x in aug[col]]
            for r in range(n):
                if r == col or aug[r][col] == fld.zero:
                    continue
                factor = aug[r][col]
                aug[r] = [
                    fld.sub(x, fld.mul(factor, y)) for x, y in zip(aug[r], aug[col])
                ]
        return Matrix(fld, [row[n:] for row in aug])

    def conjugate_by(self, p: "Matrix") -> "Matrix":
        """P * self * P^{-1} (the library-wide model-into-mold convention)."""
        self._compat(p)
        return p * self * p.inverse()

    def commutator(self, other: "Matrix") -> "Matrix":
        return self * other - other * self

    def is_upper_triangular(self) -> bool:
        z = self.field.zero
        return all(
            self.rows[i][j] == z for i in range(self.n) for j in range(i)
        )

    def is_invertible(self) -> bool:
        return self.det() != self.field.zero


class Subspace:
    """A linear subspace of K^ambient held as a reduced row-echelon basis.

    The RREF basis with strictly increasing pivots is unique, so two
    subspaces are equal iff their bases are equal row by row.
    """

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field, ambient, basis, pivots):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", tuple(tuple(r) for r in basis))
        object.__setattr__(self, "pivots", tuple(pivots))

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.field, self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.rank} of K^{self.ambient} over {self.field.name})"

    def reduce(self, vec):
        """Residual of vec after elimination against the basis."""
        if len(vec) != self.ambient:
            raise InputError("vector length must match the ambient dimension")
        fld = self.field
        v = list(vec)
        for row, piv in zip(self.basis, self.pivots):
            c = v[piv]
            if c != fld.zero:
                v = [fld.sub(x, fld.mul(c, y)) for x, y in zip(v, row)]
        return tuple(v)

    def contains(self, vec) -> bool:
        z = self.field.zero
        return all(x == z for x in self.reduce(vec))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.basis)

    def quotient_coords(self, vec):
        """Coordinates of vec + self in K^ambient / self, read off the
        non-pivot columns of the reduced residual."""
        res = self.reduce(vec)
        pivset = set(self.pivots)
        return tuple(res[j] for j in range(self.ambient) if j not in pivset)

    def enlarge(self, vectors) -> "Subspace":
        """Span of self and additional vectors."""
        return rref(list(self.basis) + [tuple(v) for v in vectors], self.field, self.ambient)


def rref(rows, field, ambient=None) -> Subspace:
    """Reduced row-echelon span of the given vectors.

    Deterministic for a fixed input order; zero rows are dropped. With no
    rows, ambient must be supplied.
    """
    rows = [tuple(field.coerce(x) for x in r) for r in rows]
    if ambient is None:
        if not rows:
            raise InputError("ambient dimension required for an empty span")
        ambient = len(rows[0])
    for r in rows:
        if len(r) != ambient:
            raise InputError("rows must all share one length")
    fld = field
    work = [list(r) for r in rows]
    pivots = []
    col = 0
    rcount = len(work)
    ri = 0
    while ri < rcount and col < ambient:
        piv = None
        for r in range(ri, rcount):
            if work[r][col] != fld.zero:
                piv = r
                break
        if piv is None:
            col += 1
            continue
        work[ri], work[piv] = work[piv], work[ri]
        inv = fld.inv(work[ri][col])
        work[ri] = [fld.mul(inv, x) for x in work[ri]]
        for r in range(rcount):
            if r == ri or work[r][col] == fld.zero:
                continue
            c = work[r][col]
            work[r] = [fld.sub(x, fld.mul(c, y)) for x, y in zip(work[r], work[ri])]
        pivots.append(col)
        ri += 1
        col += 1
    basis = [tuple(work[k]) for k in range(ri)]
    return Subspace(fld, ambient, basis, pivots)


def zero_subspace(field, ambient) -> Subspace:
    return Subspace(field, ambient, (), ())


def full_subspace(field, ambient) -> Subspace:
    one, zero = field.one, field.zero
    basis = [
        tuple(one if i == j else zero for j in range(ambient)) for i in range(ambient)
    ]
    return Subspace(field, ambient, basis, tuple(range(ambient)))


class LinearSolution:
    """Particular solution (zero on free variables) plus the kernel."""

    __slots__ = ("particular", "kernel")

    def __init__(self, particular, kernel):
        self.particular = tuple(particular)
        self.kernel = kernel


def solve(rows, b, field, ncols=None):
    """Solve the linear system (rows) * x = b over the field.

    rows is a list of row vectors of a common length; b has one entry per
    row. Returns a LinearSolution, or None when the system is inconsistent.
    """
    rows = [tuple(field.coerce(x) for x in r) for r in rows]
    b = [field.coerce(x) for x in b]
    if ncols is None:
        if not rows:
            raise InputError("ncols required for a system with no rows")
        ncols = len(rows[0])
    if len(b) != len(rows):
        raise InputError("right-hand side length must equal the row count")
    for r in rows:
        if len(r) != ncols:
            raise InputError("rows must all share one length")
    fld = field
    m = len(rows)
    work = [list(rows[i]) + [b[i]] for i in range(m)]
    pivots = []
    ri = 0
    for col in range(ncols):
        piv = None
        for r in range(ri, m):
            if work[r][col] != fld.zero:
                piv = r
                break
        if piv is None:
            continue
        work[ri], work[piv] = work[piv], work[ri]
        inv = fld.inv(work[ri][col])
        work[ri] = [fld.mul(inv, x) for x in work[ri]]
        for r in range(m):
            if r == ri or work[r][col] == fld.zero:
                continue
            c = work[r][col]
            work[r] = [fld.sub(x, fld.mul(c, y)) for x, y in zip(work[r], work[ri])]
        pivots.append(col)
        ri += 1
        if ri == m:
            break
    for r in range(ri, m):
        if work[r][ncols] != fld.zero:
            return None
    pivset = set(pivots)
    particular = [fld.zero] * ncols
    for k, col in enumerate(pivots):
        particular[col] = work[k][ncols]
    kernel_rows = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = [fld.zero] * ncols
        vec[free] = fld.one
        for k, col in enumerate(pivots):
            vec[col] = fld.neg(work[k][free])
        kernel_rows.append(tuple(vec))
    return LinearSolution(particular, rref(kernel_rows, fld, ncols))


def kernel(rows, field, ncols=None) -> Subspace:
    """Kernel of the linear map given by stacked row vectors."""
    rows = [tuple(r) for r in rows]
    if ncols is None:
        if not rows:
            raise InputError("ncols required for a map with no rows")
        ncols = len(rows[0])
    sol = solve(rows, [field.zero] * len(rows), field, ncols)
    return sol.kernel
