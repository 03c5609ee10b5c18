"""Representations of free monoids/groups and their Borel-mold structure.

Degree-2 discriminants, the commutator-trace criterion, Borel detection for
all degrees, the unique invariant complete flag, simultaneous
triangularization, and the diagonal characters.

Two conjugation conventions coexist deliberately and are stated at each
signature: triangularize returns rep'(g) = P^{-1} rep(g) P, while flag
pushforward under rep' = P rep P^{-1} is E' = P . E.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import InputError, NotBorelError
from .fields import PrimeField
from .linalg import Matrix, Subspace, rref
from .mold import Mold, algebra_closure, enumerate_subspaces, parabolic_type

MONOID = "monoid"
GROUP = "group"


class Representation:
    """Generator images of a free monoid or free group representation."""

    __slots__ = ("field", "n", "kind", "images")

    def __init__(self, field, n, kind, images):
        if kind not in (MONOID, GROUP):
            raise InputError(f"kind must be 'monoid' or 'group', got {kind!r}")
        images = tuple(images)
        for g in images:
            if not isinstance(g, Matrix):
                raise InputError("generator images must be matrices")
            if g.field != field or g.n != n:
                raise InputError("generator images must share one field and degree")
        if kind == GROUP:
            for g in images:
                if not g.is_invertible():
                    raise InputError("group representations need invertible images")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Representation is immutable")

    @property
    def m(self) -> int:
        return len(self.images)

    def __eq__(self, other):
        return (
            isinstance(other, Representation)
            and self.field == other.field
            and self.n == other.n
            and self.kind == other.kind
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.field, self.n, self.kind, self.images))

    def __repr__(self):
        return f"Representation({self.kind}, n={self.n}, m={self.m}, {self.field.name})"

    def conjugate_by(self, p: Matrix) -> "Representation":
        """P . rep . P^{-1} applied to every generator image."""
        pinv = p.inverse()
        return Representation(
            self.field, self.n, self.kind, [p * g * pinv for g in self.images]
        )

    def is_upper_triangular(self) -> bool:
        return all(g.is_upper_triangular() for g in self.images)

    def mold(self) -> Mold:
        return algebra_closure(list(self.images), self.field, self.n)


class Word:
    """A word in the free monoid/group: a sequence of 1-based generator
    indices, negative for inverses (group only)."""

    __slots__ = ("letters",)

    def __init__(self, letters):
        letters = tuple(int(x) for x in letters)
        if any(x == 0 for x in letters):
            raise InputError("word letters are nonzero 1-based indices")
        object.__setattr__(self, "letters", letters)

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return f"Word{self.letters}"

    def __mul__(self, other):
        return Word(self.letters + other.letters)


def evaluate(rep: Representation, w: Word) -> Matrix:
    """Product of generator images along the word; the empty word is I_n."""
    acc = Matrix.identity(rep.field, rep.n)
    inverses = {}
    for x in w.letters:
        idx = abs(x) - 1
        if idx >= rep.m:
            raise InputError(f"word letter {x} outside 1..{rep.m}")
        if x > 0:
            acc = acc * rep.images[idx]
        else:
            if rep.kind != GROUP:
                raise InputError("negative letters need a group representation")
            if idx not in inverses:
                inverses[idx] = rep.images[idx].inverse()
            acc = acc * inverses[idx]
    return acc


def words_up_to(kind: str, m: int, max_len: int, include_empty: bool = True):
    """All words of length <= max_len, by length then lexicographically;
    group letters are ordered 1..m then -1..-m."""
    alphabet = list(range(1, m + 1))
    if kind == GROUP:
        alphabet += [-i for i in range(1, m + 1)]
    if include_empty:
        yield Word(())
    for length in range(1, max_len + 1):
        for letters in product(alphabet, repeat=length):
            yield Word(letters)


# -- degree-2 discriminants -----------------------------------------------


def discriminant2(a: Matrix, b: Matrix):
    """tr(A)^2 det(B) + tr(B)^2 det(A) + tr(AB)^2
    - tr(A) tr(B) tr(AB) - 4 det(A) det(B); symmetric in A and B."""
    if a.n != 2 or b.n != 2:
        raise InputError("discriminant2 needs 2x2 matrices")
    if a.field != b.field:
        raise InputError("matrices must share one field")
    fld = a.field
    ta, tb = a.trace(), b.trace()
    da, db = a.det(), b.det()
    tab = (a * b).trace()
    four = fld.from_int(4)
    out = fld.mul(fld.mul(ta, ta), db)
    out = fld.add(out, fld.mul(fld.mul(tb, tb), da))
    out = fld.add(out, fld.mul(tab, tab))
    out = fld.sub(out, fld.mul(fld.mul(ta, tb), tab))
    out = fld.sub(out, fld.mul(four, fld.mul(da, db)))
    return out


def discriminant4(a: Matrix, b: Matrix, c: Matrix, d: Matrix):
    """Determinant of the 4x4 matrix of row-major flattened entries."""
    mats = (a, b, c, d)
    fld = a.field
    for x in mats:
        if x.n != 2:
            raise InputError("discriminant4 needs 2x2 matrices")
        if x.field != fld:
            raise InputError("matrices must share one field")
    big = [list(x.flatten()) for x in mats]
    work = [row[:] for row in big]
    det = fld.one
    for col in range(4):
        piv = None
        for r in range(col, 4):
            if work[r][col] != fld.zero:
                piv = r
                break
        if piv is None:
            return fld.zero
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            det = fld.neg(det)
        det = fld.mul(det, work[col][col])
        inv = fld.inv(work[col][col])
        for r in range(col + 1, 4):
            if work[r][col] == fld.zero:
                continue
            f = fld.mul(work[r][col], inv)
            work[r] = [fld.sub(x, fld.mul(f, y)) for x, y in zip(work[r], work[col])]
    return det


def span_of_pair(a: Matrix, b: Matrix):
    """(span{I_2, A, B}, whether the algebra generated by A, B stays inside)."""
    if a.n != 2 or b.n != 2:
        raise InputError("span_of_pair needs 2x2 matrices")
    if a.field != b.field:
        raise InputError("matrices must share one field")
    fld = a.field
    span = rref(
        [Matrix.identity(fld, 2).flatten(), a.flatten(), b.flatten()], fld, 4
    )
    closure = algebra_closure([a, b])
    inside = all(span.contains(row) for row in closure.basis.basis)
    return span, inside


# -- Borel structure --------------------------------------------------------


def borel_criterion_deg2(rep: Representation, max_word_len: int = 4) -> bool:
    """Commutator-trace test for degree-2 group representations: every
    commutator of words up to the length bound has trace 2, and some pair
    of generators fails to commute."""
    if rep.kind != GROUP:
        raise InputError("the commutator-trace criterion is stated for groups")
    if rep.n != 2:
        raise InputError("the commutator-trace criterion is a degree-2 test")
    noncommutative = any(
        rep.images[i] * rep.images[j] != rep.images[j] * rep.images[i]
        for i in range(rep.m)
        for j in range(i + 1, rep.m)
    )
    if not noncommutative:
        return False
    two = rep.field.from_int(2)
    mats = []
    seen = set()
    for w in words_up_to(GROUP, rep.m, max_word_len):
        g = evaluate(rep, w)
        if g not in seen:
            seen.add(g)
            mats.append(g)
    for x in mats:
        xinv = x.inverse()
        for y in mats:
            comm = x * y * xinv * y.inverse()
            if comm.trace() != two:
                return False
    return True


def is_borel(rep: Representation) -> bool:
    """True iff the images generate a conjugate of the full upper-triangular
    algebra: closure rank n(n+1)/2 and detected type (1, ..., 1)."""
    n = rep.n
    m = rep.mold()
    if m.rank != n * (n + 1) // 2:
        return False
    detected = parabolic_type(m)
    return detected is not None and detected[0].is_borel


@dataclass(frozen=True)
class Flag:
    """A complete flag E_1 < E_2 < ... < E_{n-1} of echelonized subspaces."""

    subspaces: tuple

    def __iter__(self):
        return iter(self.subspaces)

    def __getitem__(self, i):
        return self.subspaces[i]

    def __len__(self):
        return len(self.subspaces)


def _commutator_span_matrices(m: Mold):
    mats = m.basis_matrices()
    flats = [(a * b - b * a).flatten() for a in mats for b in mats]
    span = rref(flats, m.field, m.n * m.n)
    return [Matrix.from_flat(m.field, m.n, row) for row in span.basis]


def invariant_flag(rep: Representation) -> Flag:
    """The unique complete invariant flag of a Borel representation.

    E_i is the image of (n-i)-fold products from the commutator span applied
    to K^n. If the chain ever has the wrong rank (impossible for a true
    Borel mold over a field, but guarded), an exhaustive invariant-subspace
    search over F_q fills in the level.
    """
    if not is_borel(rep):
        raise NotBorelError("invariant_flag needs a representation with Borel mold")
    n, fld = rep.n, rep.field
    mold = rep.mold()
    comm = _commutator_span_matrices(mold)
    levels = {}
    current = [
        tuple(fld.one if i == j else fld.zero for i in range(n)) for j in range(n)
    ]
    for i in range(n - 1, 0, -1):
        image = rref([c.apply(v) for c in comm for v in current], fld, n)
        if image.rank == i:
            levels[i] = image
            current = list(image.basis)
        else:
            levels[i] = _fallback_invariant_level(rep, mold, i)
            current = list(levels[i].basis)
    return Flag(tuple(levels[i] for i in range(1, n)))


def _fallback_invariant_level(rep, mold, i):
    if isinstance(rep.field, PrimeField):
        mats = mold.basis_matrices()
        for s in enumerate_subspaces(rep.field, rep.n, i):
            if all(s.contains(b.apply(v)) for b in mats for v in s.basis):
                return s
    raise NotBorelError(f"no invariant subspace of dimension {i} found")


def _adapted_columns(flag: Flag, field, n):
    """Canonical adapted basis: for each level take the echelon row carrying
    the newly appearing pivot, then complete with the unit vectors of the
    still-unused coordinates. Depends only on the flag."""
    cols = []
    seen = set()
    for sub in flag:
        for row, piv in zip(sub.basis, sub.pivots):
            if piv not in seen:
                seen.add(piv)
                cols.append(row)
    for j in range(n):
        if j not in seen:
            cols.append(tuple(field.one if i == j else field.zero for i in range(n)))
            seen.add(j)
    return cols


def triangularize(rep: Representation):
    """(P, rep') with rep'(g) = P^{-1} rep(g) P upper triangular for every
    generator; P's columns are the canonical adapted basis of the flag."""
    if not is_borel(rep):
        raise NotBorelError("triangularize needs a representation with Borel mold")
    n, fld = rep.n, rep.field
    flag = invariant_flag(rep) if n > 1 else Flag(())
    cols = _adapted_columns(flag, fld, n)
    p = Matrix(fld, [[cols[k][i] for k in range(n)] for i in range(n)])
    pinv = p.inverse()
    images = [pinv * g * p for g in rep.images]
    for g in images:
        if not g.is_upper_triangular():
            raise NotBorelError("triangularization produced a non-triangular image")
    return p, Representation(fld, n, rep.kind, images)


def characters(rep: Representation):
    """The n diagonal characters, ordered by the flag: a tuple of tuples,
    chars[i][g] = (i, i) entry of the triangularized image of generator g."""
    _, tri = triangularize(rep)
    n = rep.n
    return tuple(
        tuple(tri.images[g].rows[i][i] for g in range(rep.m)) for i in range(n)
    )
