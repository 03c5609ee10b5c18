"""Molds: unital product-closed matrix subspaces at a field point.

Provides subalgebra closure, membership, the bracket normalizer, the space
of derivations into the quotient, invariant subspaces, and detection of
block-upper-triangular (parabolic) structure together with a conjugator.

Conjugator convention, used library-wide: the returned P satisfies
P * model * P^{-1} = M, i.e. P maps the standard model onto the mold.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .errors import InputError, UnsupportedCaseError
from .fields import PrimeField
from .linalg import (
    Matrix,
    Subspace,
    full_subspace,
    kernel,
    rref,
)


@dataclass(frozen=True)
class ParabolicType:
    """A composition (n_1, ..., n_r) naming a block-upper-triangular shape."""

    composition: tuple

    def __post_init__(self):
        comp = tuple(int(c) for c in self.composition)
        if not comp or any(c < 1 for c in comp):
            raise InputError(f"invalid composition: {self.composition!r}")
        object.__setattr__(self, "composition", comp)

    @property
    def degree(self) -> int:
        return sum(self.composition)

    def rank(self) -> int:
        """Dimension of the block-upper-triangular algebra of this type."""
        comp = self.composition
        r = len(comp)
        return sum(comp[i] * comp[j] for i in range(r) for j in range(i, r))

    def partial_sums(self) -> tuple:
        sums = []
        acc = 0
        for c in self.composition:
            acc += c
            sums.append(acc)
        return tuple(sums)

    @property
    def is_borel(self) -> bool:
        return all(c == 1 for c in self.composition)

    def label(self) -> str:
        return ",".join(str(c) for c in self.composition)


class Mold:
    """A unital, product-closed subspace of M_n(K) in canonical echelon form."""

    __slots__ = ("field", "n", "basis", "_mats")

    def __init__(self, field, n, basis: Subspace):
        if basis.ambient != n * n:
            raise InputError("mold basis must live in K^(n^2)")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_mats", None)
        ident = Matrix.identity(field, n)
        if not basis.contains(ident.flatten()):
            raise InputError("a mold must contain the identity matrix")
        for a in self.basis_matrices():
            for b in self.basis_matrices():
                if not basis.contains((a * b).flatten()):
                    raise InputError("a mold must be closed under multiplication")

    def __setattr__(self, name, value):
        raise AttributeError("Mold is immutable")

    @property
    def rank(self) -> int:
        return self.basis.rank

    def basis_matrices(self):
        if self._mats is None:
            mats = tuple(
                Matrix.from_flat(self.field, self.n, row) for row in self.basis.basis
            )
            object.__setattr__(self, "_mats", mats)
        return self._mats

    def __eq__(self, other):
        return (
            isinstance(other, Mold)
            and self.field == other.field
            and self.n == other.n
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.field, self.n, self.basis))

    def __repr__(self):
        return f"Mold(n={self.n}, rank={self.rank}, field={self.field.name})"


def algebra_closure(gens, field=None, n=None) -> Mold:
    """Smallest unital subalgebra containing the generators.

    With an empty generator list, field and n must be given; the result is
    then the scalar span of the identity.
    """
    gens = list(gens)
    if gens:
        field = gens[0].field
        n = gens[0].n
        for g in gens:
            if g.field != field or g.n != n:
                raise InputError("generators must share one field and one degree")
    elif field is None or n is None:
        raise InputError("field and degree required for an empty generator list")
    amb = n * n
    span = rref(
        [Matrix.identity(field, n).flatten()] + [g.flatten() for g in gens], field, amb
    )
    while True:
        mats = [Matrix.from_flat(field, n, row) for row in span.basis]
        prods = [(a * b).flatten() for a in mats for b in mats]
        bigger = span.enlarge(prods)
        if bigger.rank == span.rank:
            break
        span = bigger
    return Mold(field, n, span)


def mold_contains(m: Mold, x: Matrix) -> bool:
    if x.field != m.field or x.n != m.n:
        raise InputError("matrix degree/field must match the mold")
    return m.basis.contains(x.flatten())


def parabolic_model(field, composition) -> Mold:
    """The standard block-upper-triangular mold of the given composition."""
    ptype = ParabolicType(tuple(composition))
    n = ptype.degree
    blocks = []
    for b, size in enumerate(ptype.composition):
        blocks.extend([b] * size)
    rows = []
    for i in range(n):
        for j in range(n):
            if blocks[i] <= blocks[j]:
                rows.append(Matrix.unit(field, n, i, j).flatten())
    return Mold(field, n, rref(rows, field, n * n))


def borel_model(field, n) -> Mold:
    return parabolic_model(field, (1,) * n)


def normalizer(m: Mold) -> Subspace:
    """{X in M_n(K) : [X, Y] in M for every Y in M}, as a subspace of K^(n^2).

    Computed as the kernel of the linear map X -> ([X, Y_l] mod M)_l.
    """
    n, fld = m.n, m.field
    amb = n * n
    units = [Matrix.unit(fld, n, k // n, k % n) for k in range(amb)]
    columns = []
    for u in units:
        col = []
        for y in m.basis_matrices():
            col.extend(m.basis.quotient_coords(u.commutator(y).flatten()))
        columns.append(col)
    height = len(columns[0])
    rows = [tuple(col[t] for col in columns) for t in range(height)]
    return kernel(rows, fld, amb)


def centralizer(m: Mold) -> Subspace:
    """{X : XY = YX for every Y in M}, as a subspace of K^(n^2)."""
    n, fld = m.n, m.field
    amb = n * n
    units = [Matrix.unit(fld, n, k // n, k % n) for k in range(amb)]
    columns = []
    for u in units:
        col = []
        for y in m.basis_matrices():
            col.extend(u.commutator(y).flatten())
        columns.append(col)
    rows = [tuple(col[t] for col in columns) for t in range(len(columns[0]))]
    return kernel(rows, fld, amb)


@dataclass(frozen=True)
class DerivationSpace:
    """Solutions of the Leibniz system valued in M_n(K)/M.

    Each basis element is a tuple with one quotient-coordinate vector per
    mold basis matrix (quotient coordinates = non-pivot columns of K^(n^2)
    after reduction against the mold basis).
    """

    dimension: int
    basis: tuple
    quotient_dim: int


def _structure_coefficients(m: Mold, w: Matrix):
    """Coefficients of w in the mold's echelon basis (w must lie in M)."""
    flat = w.flatten()
    coeffs = tuple(flat[piv] for piv in m.basis.pivots)
    if not m.basis.contains(flat):
        raise InputError("matrix does not lie in the mold")
    return coeffs


def _quotient_lift_matrices(m: Mold):
    """Standard lifts of the quotient coordinate directions."""
    n = m.n
    pivset = set(m.basis.pivots)
    cols = [j for j in range(n * n) if j not in pivset]
    return [Matrix.unit(m.field, n, c // n, c % n) for c in cols]


def _left_action(m: Mold, b: Matrix):
    """Matrix (rows = output coords) of left multiplication by b on the quotient."""
    lifts = _quotient_lift_matrices(m)
    cols = [m.basis.quotient_coords((b * e).flatten()) for e in lifts]
    q = len(lifts)
    return [tuple(cols[c][t] for c in range(q)) for t in range(q)]


def _right_action(m: Mold, b: Matrix):
    lifts = _quotient_lift_matrices(m)
    cols = [m.basis.quotient_coords((e * b).flatten()) for e in lifts]
    q = len(lifts)
    return [tuple(cols[c][t] for c in range(q)) for t in range(q)]


def derivation_space(m: Mold) -> DerivationSpace:
    """Solve d(XY) = X d(Y) + d(X) Y over all basis pairs, values in the
    quotient M_n(K)/M."""
    fld = m.field
    d = m.rank
    q = m.n * m.n - d
    mats = m.basis_matrices()
    if q == 0:
        return DerivationSpace(0, (), 0)
    left = [_left_action(m, b) for b in mats]
    right = [_right_action(m, b) for b in mats]
    struct = [
        [_structure_coefficients(m, mats[i] * mats[j]) for j in range(d)]
        for i in range(d)
    ]
    rows = []
    zero = fld.zero
    for i in range(d):
        for j in range(d):
            c = struct[i][j]
            for t in range(q):
                row = [zero] * (d * q)
                for k in range(d):
                    if c[k] != zero:
                        row[k * q + t] = fld.add(row[k * q + t], c[k])
                for tp in range(q):
                    lv = left[i][t][tp]
                    if lv != zero:
                        row[j * q + tp] = fld.sub(row[j * q + tp], lv)
                    rv = right[j][t][tp]
                    if rv != zero:
                        row[i * q + tp] = fld.sub(row[i * q + tp], rv)
                rows.append(tuple(row))
    ker = kernel(rows, fld, d * q)
    basis = tuple(
        tuple(vec[k * q : (k + 1) * q] for k in range(d)) for vec in ker.basis
    )
    return DerivationSpace(ker.rank, basis, q)


def enumerate_subspaces(field, ambient, dim):
    """All dim-dimensional subspaces of F_q^ambient, one echelon cell at a
    time, in a fixed deterministic order."""
    if not isinstance(field, PrimeField):
        raise InputError("subspace enumeration requires a finite prime field")
    if dim == 0:
        yield Subspace(field, ambient, (), ())
        return
    p = field.p
    for pivots in combinations(range(ambient), dim):
        free = []
        pivset = set(pivots)
        for r in range(dim):
            for c in range(pivots[r] + 1, ambient):
                if c not in pivset:
                    free.append((r, c))
        for assignment in product(range(p), repeat=len(free)):
            rows = [[0] * ambient for _ in range(dim)]
            for r in range(dim):
                rows[r][pivots[r]] = 1
            for (r, c), v in zip(free, assignment):
                rows[r][c] = v
            yield Subspace(field, ambient, [tuple(r) for r in rows], pivots)


def invariant_subspaces(m: Mold, r: int):
    """All r-dimensional subspaces V of K^n with M . V inside V.

    Exhaustive over F_q. Over Q only molds with detected parabolic structure
    are supported (the subspaces are read off the flag); anything else
    raises UnsupportedCaseError.
    """
    n = m.n
    if not 1 <= r <= n - 1:
        raise InputError(f"subspace dimension must be in [1, {n - 1}], got {r}")
    mats = m.basis_matrices()
    if isinstance(m.field, PrimeField):
        found = []
        for s in enumerate_subspaces(m.field, n, r):
            if all(s.contains(b.apply(v)) for b in mats for v in s.basis):
                found.append(s)
        return sorted(found, key=lambda s: s.basis)
    detected = parabolic_type(m)
    if detected is None:
        raise UnsupportedCaseError(
            "invariant subspaces over Q are supported only for parabolic molds"
        )
    ptype, p = detected
    if r not in ptype.partial_sums():
        return []
    cols = [tuple(p.rows[i][k] for i in range(n)) for k in range(r)]
    return [rref(cols, m.field, n)]


def _trace_radical_matrices(m: Mold):
    """Kernel of the trace pairing tr(xy) restricted to the mold."""
    fld = m.field
    mats = m.basis_matrices()
    d = m.rank
    rows = [
        tuple((mats[k] * mats[l]).trace() for k in range(d)) for l in range(d)
    ]
    ker = kernel(rows, fld, d)
    rad = []
    for coeffs in ker.basis:
        acc = Matrix.zero(fld, m.n)
        for c, b in zip(coeffs, mats):
            if c != fld.zero:
                acc = acc + b.scale(c)
        rad.append(acc)
    return rad


def _kernel_of_operators(field, n, operators) -> Subspace:
    """Common kernel of a list of n x n matrices acting on K^n."""
    rows = []
    for op in operators:
        rows.extend(op.rows)
    if not rows:
        return full_subspace(field, n)
    return kernel(rows, field, n)


def _adapted_basis_columns(chain):
    """Extend through a strictly increasing chain of echelonized subspaces,
    always taking the basis row carrying each newly appearing pivot."""
    cols = []
    seen = set()
    for sub in chain:
        for row, piv in zip(sub.basis, sub.pivots):
            if piv not in seen:
                seen.add(piv)
                cols.append(row)
    return cols


def parabolic_type(m: Mold):
    """Detect conjugacy to a block-upper-triangular model.

    Returns (ParabolicType, P) with P * model * P^{-1} = M, or None when no
    such structure is detected over the base field. The full matrix algebra
    (n >= 2) reports None.

    The nilpotent part is computed as the radical of the trace pairing on M
    (for genuinely block-upper-triangular molds this is the strict-upper
    part in every characteristic); the flag is its kernel chain.
    """
    fld, n = m.field, m.n
    rad = _trace_radical_matrices(m)
    chain = []
    prev_rank = 0
    current = _kernel_of_operators(fld, n, rad)
    while True:
        if current.rank == prev_rank:
            return None  # chain stalled below K^n: not nilpotent
        chain.append(current)
        prev_rank = current.rank
        if current.rank == n:
            break
        # next kernel: vectors that the radical maps into the current one
        rows = []
        for op in rad:
            for u in _operator_into(op, current):
                rows.append(u)
        current = kernel(rows, fld, n) if rows else full_subspace(fld, n)
    composition = []
    last = 0
    for sub in chain:
        composition.append(sub.rank - last)
        last = sub.rank
    if len(composition) == 1 and n >= 2:
        return None  # the full matrix algebra is reported as non-parabolic
    ptype = ParabolicType(tuple(composition))
    if ptype.rank() != m.rank:
        return None
    cols = _adapted_basis_columns(chain)
    p = Matrix(fld, [[cols[k][i] for k in range(n)] for i in range(n)])
    model = parabolic_model(fld, ptype.composition)
    pinv = p.inverse()
    for b in m.basis_matrices():
        if not model.basis.contains((pinv * b * p).flatten()):
            return None  # dimensions matched by accident; not the stabilizer
    return ptype, p


def _operator_into(op: Matrix, target: Subspace):
    """Rows of the map v -> (op v mod target), used to grow kernel chains."""
    n = op.n
    cols = []
    for j in range(n):
        e = tuple(op.field.one if i == j else op.field.zero for i in range(n))
        cols.append(target.quotient_coords(op.apply(e)))
    height = len(cols[0])
    return [tuple(cols[j][t] for j in range(n)) for t in range(height)]
