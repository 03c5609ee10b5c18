"""Canonical forms for representations with Borel mold.

The machinery: the diagonal-first order on upper-triangular index pairs,
the pivot (star) condition for a chosen word per index, the
epsilon/eta/tau elimination, reduction to well-shaped matrices supported in
convex hulls, the normalizing upper-triangular matrix fixing designated
entries to 0/1, and the equivalence decision built on top.

Index pairs are 1-based (i, j) with i <= j throughout, matching the
mathematical convention; matrix entry access subtracts 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .borel import Representation, Word, evaluate, is_borel, triangularize, words_up_to
from .errors import (
    InputError,
    InternalInvariantError,
    NotBorelError,
    WordSearchExhaustedError,
)
from .fields import PrimeField
from .io import dump_json, matrix_to_lists
from .linalg import Matrix


def index_order(n: int):
    """All pairs (i, j), 1 <= i <= j <= n, sorted by |i - j| then i."""
    if n < 1:
        raise InputError(f"degree must be at least 1, got {n}")
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    pairs.sort(key=lambda ij: (ij[1] - ij[0], ij[0]))
    return pairs


def _order_key(ij):
    return (ij[1] - ij[0], ij[0])


def hull(i: int, j: int, n: int):
    """Convex hull of (i, j): all pairs (k, l) with k <= i and l >= j."""
    return {(k, l) for k in range(1, i + 1) for l in range(j, n + 1) if k <= l}


def hull_of_set(pairs, n: int):
    out = set()
    for (i, j) in pairs:
        out |= hull(i, j, n)
    return out


def support(mat: Matrix):
    """Upper-triangular index pairs carrying a nonzero entry."""
    z = mat.field.zero
    return {
        (i, j)
        for i in range(1, mat.n + 1)
        for j in range(i, mat.n + 1)
        if mat.rows[i - 1][j - 1] != z
    }


def is_shaped(mat: Matrix, i: int, j: int) -> bool:
    """(i, j)-shaped: nonzero (i, j) entry and support inside hull(i, j)."""
    if mat.rows[i - 1][j - 1] == mat.field.zero:
        return False
    return support(mat) <= hull(i, j, mat.n)


@dataclass(frozen=True)
class StarFailure:
    """Zero pivot at the named index: the word set fails the condition
    there. A value, not an exception -- callers search over word sets."""

    index: tuple


@dataclass(frozen=True)
class EpsilonEta:
    """Output of the elimination: per-index pivot matrices Y with their
    pivots tau, and the coefficient tables for the generators."""

    n: int
    field: object
    words: dict
    y: dict
    tau: dict
    epsilon: dict  # generator index (1-based) -> {(i, j): coefficient}

    def coefficients(self, mat: Matrix) -> dict:
        """Run the elimination on an upper-triangular matrix; the result c
        satisfies mat = sum c[(i,j)] * Y(i,j) exactly."""
        coeffs, eta = _eliminate(mat, index_order(self.n), self.y, self.tau)
        if support(eta):
            raise InternalInvariantError("elimination left a nonzero residual")
        return coeffs


def _eliminate(mat: Matrix, pairs, y: dict, tau: dict):
    """Subtract multiples of the Y pivots in index order; returns the
    coefficients and the residual after the given pairs."""
    fld = mat.field
    coeffs = {}
    eta = mat
    for (i, j) in pairs:
        if (i, j) not in y:
            break
        c = fld.div(eta.rows[i - 1][j - 1], tau[(i, j)])
        coeffs[(i, j)] = c
        if c != fld.zero:
            eta = eta - y[(i, j)].scale(c)
    return coeffs, eta


def _check_triangular_rep(rep: Representation):
    if not rep.is_upper_triangular():
        raise InputError("generator images must be upper triangular here")


def _validate_words(rep: Representation, words: dict):
    pairs = index_order(rep.n)
    if set(words) != set(pairs):
        raise InputError("word set must assign a word to every index pair")
    for w in words.values():
        if not isinstance(w, Word):
            raise InputError("word set values must be Words")


def epsilon_eta(rep: Representation, words: dict):
    """The elimination recursion in index order.

    rep must be upper triangular. Returns EpsilonEta on success, or a
    StarFailure naming the first index whose pivot vanishes.
    """
    _check_triangular_rep(rep)
    _validate_words(rep, words)
    pairs = index_order(rep.n)
    fld = rep.field
    y = {}
    tau = {}
    for k, (i, j) in enumerate(pairs):
        mat = evaluate(rep, words[(i, j)])
        _, eta = _eliminate(mat, pairs[:k], y, tau)
        pivot = eta.rows[i - 1][j - 1]
        if pivot == fld.zero:
            return StarFailure((i, j))
        y[(i, j)] = eta
        tau[(i, j)] = pivot
    epsilon = {}
    for g in range(1, rep.m + 1):
        coeffs, eta = _eliminate(rep.images[g - 1], pairs, y, tau)
        if support(eta):
            raise InternalInvariantError("generator did not reduce to zero")
        epsilon[g] = coeffs
    return EpsilonEta(rep.n, fld, dict(words), y, tau, epsilon)


def find_star_words(rep: Representation, max_len: int = 4):
    """Greedy word search in index order.

    Words are tried by length (the empty word first), lexicographically
    within a length, group inverses after positive letters; the first word
    with a nonzero pivot given the already-fixed ones is kept. Returns the
    word map, or None when some index exhausts the bound.
    """
    _check_triangular_rep(rep)
    pairs = index_order(rep.n)
    fld = rep.field
    candidates = [
        (w, evaluate(rep, w)) for w in words_up_to(rep.kind, rep.m, max_len)
    ]
    words = {}
    y = {}
    tau = {}
    for k, (i, j) in enumerate(pairs):
        for w, mat in candidates:
            _, eta = _eliminate(mat, pairs[:k], y, tau)
            pivot = eta.rows[i - 1][j - 1]
            if pivot != fld.zero:
                words[(i, j)] = w
                y[(i, j)] = eta
                tau[(i, j)] = pivot
                break
        else:
            return None
    return words


def well_shaped_basis(y: dict, tau: dict, n: int = None, field=None):
    """Reduce the pivot matrices to well-shaped ones by descending
    induction: repeatedly subtract the minimal hull-escaping component.

    Returns (x, a) where x maps each index pair to its (i, j)-shaped matrix
    and a[(i, j)] records the subtraction coefficients keyed by the index
    subtracted.
    """
    if not y:
        raise InputError("empty pivot table")
    some = next(iter(y.values()))
    n = some.n if n is None else n
    field = some.field if field is None else field
    pairs = index_order(n)
    if set(y) != set(pairs) or set(tau) != set(pairs):
        raise InputError("pivot tables must cover every index pair")
    for (i, j) in pairs:
        mat = y[(i, j)]
        if not mat.is_upper_triangular():
            raise InputError("pivot matrices must be upper triangular")
        if mat.rows[i - 1][j - 1] == field.zero or mat.rows[i - 1][j - 1] != tau[(i, j)]:
            raise InputError(f"zero or inconsistent pivot at {(i, j)}")
        bad = [p for p in support(mat) if _order_key(p) < _order_key((i, j))]
        if bad:
            raise InputError(f"pivot matrix at {(i, j)} has support before its index")
    x = {}
    acoeffs = {}
    for (i, j) in reversed(pairs):
        cur = y[(i, j)]
        coeffs = {}
        base = hull(i, j, n)
        while True:
            extra = hull_of_set(support(cur), n) - base
            if not extra:
                break
            s, t = min(extra, key=_order_key)
            a = field.div(cur.rows[s - 1][t - 1], x[(s, t)].rows[s - 1][t - 1])
            coeffs[(s, t)] = a
            cur = cur - x[(s, t)].scale(a)
        if not is_shaped(cur, i, j):
            raise InternalInvariantError(f"reduction at {(i, j)} is not shaped")
        x[(i, j)] = cur
        acoeffs[(i, j)] = coeffs
    return x, acoeffs


def decompose(mat: Matrix, x: dict) -> dict:
    """Coefficients of an upper-triangular matrix against the well-shaped
    family: repeatedly strip the minimal support index. Exact recovery:
    mat = sum a[(i,j)] * X(i,j)."""
    fld = mat.field
    cur = mat
    coeffs = {}
    while True:
        supp = support(cur)
        if not supp:
            return coeffs
        i, j = min(supp, key=_order_key)
        if (i, j) in coeffs:
            raise InternalInvariantError("decomposition revisited an index")
        a = fld.div(cur.rows[i - 1][j - 1], x[(i, j)].rows[i - 1][j - 1])
        coeffs[(i, j)] = a
        cur = cur - x[(i, j)].scale(a)


def normalizing_matrix(x: dict, tau: dict) -> Matrix:
    """Build the upper-triangular invertible Q that pins the designated
    entries of Q X(i,j) Q^{-1}: (1,i) entries to 1 for i > floor((n+1)/2),
    (i,n) entries to 1 for 2 <= i <= floor((n+1)/2), the off-diagonal
    (1,*) entries of X(1,1) and the (j,i) entries of X(i,i) to 0.

    The diagonal comes from tau ratios; each off-diagonal entry solves one
    affine equation whose leading coefficient is a pivot unit.
    """
    some = next(iter(x.values()))
    n, fld = some.n, some.field
    pairs = index_order(n)
    if set(x) != set(pairs):
        raise InputError("well-shaped table must cover every index pair")
    h = (n + 1) // 2
    diag = [fld.one] * n
    for k in range(2, h + 1):
        diag[k - 1] = fld.div(tau[(1, n)], tau[(k, n)])
    for k in range(h + 1, n + 1):
        diag[k - 1] = tau[(1, k)]
    entries = {}

    def build_q():
        rows = []
        for i in range(1, n + 1):
            row = []
            for j in range(1, n + 1):
                if i == j:
                    row.append(diag[i - 1])
                elif i < j:
                    row.append(entries.get((i, j), fld.zero))
                else:
                    row.append(fld.zero)
            rows.append(row)
        return Matrix(fld, rows)

    for (i, j) in pairs:
        if i == j:
            continue
        target_mat = x[(1, 1)] if i == 1 else x[(j, j)]
        row, col = (1, j) if i == 1 else (i, j)
        values = []
        for probe in (fld.zero, fld.one):
            entries[(i, j)] = probe
            q = build_q()
            conj = q * target_mat * q.inverse()
            values.append(conj.rows[row - 1][col - 1])
        slope = fld.sub(values[1], values[0])
        if slope == fld.zero:
            raise InternalInvariantError(
                f"normalization equation at {(i, j)} is degenerate"
            )
        entries[(i, j)] = fld.div(fld.neg(values[0]), slope)
    q = build_q()
    qinv = q.inverse()
    for i in range(h + 1, n + 1):
        if (q * x[(1, i)] * qinv).rows[0][i - 1] != fld.one:
            raise InternalInvariantError("normalization (1,i) entry is not 1")
    for i in range(2, h + 1):
        if (q * x[(i, n)] * qinv).rows[i - 1][n - 1] != fld.one:
            raise InternalInvariantError("normalization (i,n) entry is not 1")
    conj11 = q * x[(1, 1)] * qinv
    for i in range(2, n + 1):
        if conj11.rows[0][i - 1] != fld.zero:
            raise InternalInvariantError("normalization (1,1) row is not cleared")
    for i in range(3, n + 1):
        conj = q * x[(i, i)] * qinv
        for j in range(2, i):
            if conj.rows[j - 1][i - 1] != fld.zero:
                raise InternalInvariantError("normalization column is not cleared")
    return q


@dataclass(frozen=True)
class CanonicalData:
    """Canonical form of a representation with Borel mold.

    The serialized tables (tau, epsilon, a, x, q) are recomputed on the
    canonical images themselves, so they are exact conjugation invariants
    and the pipeline is idempotent (q is always the identity there). The
    non-invariant pipeline pieces are kept as attributes: triangularizer P
    (rep_tri = P^{-1} rep P), the pre-normalization tables, the normalizing
    matrix pre_q, and transform = pre_q * P^{-1}, which conjugates the
    input onto the canonical images.
    """

    rep: Representation
    words: dict
    images: tuple
    tau: dict
    epsilon: dict
    acoeffs: dict
    xmats: dict
    q: Matrix
    triangularizer: Matrix
    rep_tri: Representation
    pre_tau: dict
    pre_xmats: dict
    pre_q: Matrix
    transform: Matrix

    def canonical_rep(self) -> Representation:
        return Representation(self.rep.field, self.rep.n, self.rep.kind, self.images)

    def to_doc(self) -> dict:
        fmt = self.rep.field.format

        def pair_key(ij):
            return f"{ij[0]},{ij[1]}"

        return {
            "field": self.rep.field.descriptor(),
            "n": self.rep.n,
            "kind": self.rep.kind,
            "m": self.rep.m,
            "words": {pair_key(ij): list(w.letters) for ij, w in self.words.items()},
            "tau": {pair_key(ij): fmt(v) for ij, v in self.tau.items()},
            "epsilon": {
                str(g): {pair_key(ij): fmt(v) for ij, v in table.items()}
                for g, table in self.epsilon.items()
            },
            "a": {
                pair_key(ij): {pair_key(kl): fmt(v) for kl, v in table.items()}
                for ij, table in self.acoeffs.items()
            },
            "x": {pair_key(ij): matrix_to_lists(m) for ij, m in self.xmats.items()},
            "q": matrix_to_lists(self.q),
            "images": [matrix_to_lists(g) for g in self.images],
        }

    def to_json(self) -> str:
        return dump_json(self.to_doc())


def canonical_form(rep: Representation, max_len: int = 4, words: dict = None) -> CanonicalData:
    """Triangularize, find words satisfying the pivot condition, eliminate,
    reduce to well-shaped matrices, normalize, and emit the canonical
    generator images Q rep_tri(g) Q^{-1} with all invariant tables.

    Deterministic for a fixed representation. Raises NotBorelError off the
    Borel locus and WordSearchExhaustedError when no word set fits max_len.
    """
    if not is_borel(rep):
        raise NotBorelError("canonical_form needs a representation with Borel mold")
    p, rep_tri = triangularize(rep)
    if words is None:
        words = find_star_words(rep_tri, max_len)
        if words is None:
            raise WordSearchExhaustedError(max_len)
    ee = epsilon_eta(rep_tri, words)
    if isinstance(ee, StarFailure):
        raise InputError(f"word set fails the pivot condition at {ee.index}")
    pre_x, _pre_a = well_shaped_basis(ee.y, ee.tau)
    pre_q = normalizing_matrix(pre_x, ee.tau)
    pre_q_inv = pre_q.inverse()
    images = tuple(pre_q * g * pre_q_inv for g in rep_tri.images)
    canonical_rep = Representation(rep.field, rep.n, rep.kind, images)
    ee2 = epsilon_eta(canonical_rep, words)
    if isinstance(ee2, StarFailure):
        raise InternalInvariantError("canonical images lost the pivot condition")
    x2, a2 = well_shaped_basis(ee2.y, ee2.tau)
    q2 = normalizing_matrix(x2, ee2.tau)
    if q2 != Matrix.identity(rep.field, rep.n):
        raise InternalInvariantError("canonical form is not idempotent")
    return CanonicalData(
        rep=rep,
        words=dict(words),
        images=images,
        tau=ee2.tau,
        epsilon=ee2.epsilon,
        acoeffs=a2,
        xmats=x2,
        q=q2,
        triangularizer=p,
        rep_tri=rep_tri,
        pre_tau=ee.tau,
        pre_xmats=pre_x,
        pre_q=pre_q,
        transform=pre_q * p.inverse(),
    )


def _canonical_images_for_words(rep_tri: Representation, words: dict):
    """Canonical images in the chart of the given word set, or None when
    the pivot condition fails."""
    ee = epsilon_eta(rep_tri, words)
    if isinstance(ee, StarFailure):
        return None
    x, _ = well_shaped_basis(ee.y, ee.tau)
    q = normalizing_matrix(x, ee.tau)
    qinv = q.inverse()
    return tuple(q * g * qinv for g in rep_tri.images)


def all_invertible_matrices(field, n):
    """Every element of GL_n(F_q), enumerated deterministically."""
    if not isinstance(field, PrimeField):
        raise InputError("exhaustive GL enumeration requires a finite field")
    out = []
    for flat in product(range(field.p), repeat=n * n):
        m = Matrix.from_flat(field, n, flat)
        if m.is_invertible():
            out.append(m)
    return out


def equivalent(rep1: Representation, rep2: Representation, max_len: int = 4):
    """Decide conjugacy of two representations with Borel mold.

    True/False when decidable; None is the explicit undecided verdict
    (only over Q when no word set was found within max_len for either
    side -- over a finite field an exhaustive conjugation search settles
    it instead).
    """
    if (
        rep1.n != rep2.n
        or rep1.field != rep2.field
        or rep1.kind != rep2.kind
        or rep1.m != rep2.m
    ):
        raise InputError("representations must share degree, field, kind, and rank")
    if not is_borel(rep1) or not is_borel(rep2):
        raise NotBorelError("equivalence is decided on the Borel locus")
    _, tri1 = triangularize(rep1)
    _, tri2 = triangularize(rep2)
    words1 = find_star_words(tri1, max_len)
    if words1 is not None:
        mine = _canonical_images_for_words(tri1, words1)
        theirs = _canonical_images_for_words(tri2, words1)
        # the pivot condition is conjugation-invariant, so a failure on the
        # other side already refutes equivalence
        if theirs is None:
            return False
        return mine == theirs
    words2 = find_star_words(tri2, max_len)
    if words2 is not None:
        theirs = _canonical_images_for_words(tri2, words2)
        mine = _canonical_images_for_words(tri1, words2)
        if mine is None:
            return False
        return mine == theirs
    if isinstance(rep1.field, PrimeField):
        for p in all_invertible_matrices(rep1.field, rep1.n):
            if rep1.conjugate_by(p) == rep2:
                return True
        return False
    return None
