"""Brute-force census of unital product-closed subspaces of M_n(F_q).

Candidates are enumerated as reduced-echelon cells of subspaces that
already contain the identity (one cell per subspace, so the loop is
duplicate-free), checked for closure with early exit, then re-verified and
classified through the mold module. The paper-derived point-count
predictions and flag counts live alongside for cross-checking.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product

from . import config
from .errors import InputError, ResourceLimitError
from .fields import GF, is_prime
from .linalg import Matrix, rref
from .mold import Mold, ParabolicType, parabolic_type


def gaussian_binomial(m: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^m."""
    if k < 0 or k > m:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def flag_point_count(composition, q: int) -> int:
    """Number of flags of the given block-size type in F_q^n (a product of
    Gaussian binomials along the chain)."""
    ptype = ParabolicType(tuple(composition))
    if not isinstance(q, int) or q < 2:
        raise InputError(f"field size must be an integer >= 2, got {q!r}")
    remaining = ptype.degree
    count = 1
    for part in ptype.composition:
        count *= gaussian_binomial(remaining, part, q)
        remaining -= part
    return count


def predicted_count(n: int, d: int, q: int):
    """Point counts pinned by the moduli identifications, where one exists:
    single points at d = 1 and d = n^2, the projective spaces in degree 2,
    the empty band n^2-n+1 < d < n^2, and the two disjoint projective
    spaces at d = n^2 - n + 1 for n > 2. None elsewhere."""
    if n < 1 or d < 1 or d > n * n:
        return 0
    if d == 1:
        return 1
    if d == n * n:
        return 1
    if n * n - n + 1 < d < n * n:
        return 0
    if d == n * n - n + 1:
        if n == 2:
            return q + 1
        return 2 * (q**n - 1) // (q - 1)
    if n == 2 and d == 2:
        return q * q + q + 1
    return None


@dataclass(frozen=True)
class MoldCensus:
    n: int
    d: int
    q: int
    total: int
    by_type: dict
    searched: int
    representatives: tuple = None

    def to_doc(self) -> dict:
        doc = {
            "n": self.n,
            "d": self.d,
            "q": self.q,
            "total": self.total,
            "byType": dict(self.by_type),
            "searched": self.searched,
        }
        if self.representatives is not None:
            doc["representatives"] = [
                [[str(x) for x in row] for row in m.basis.basis]
                for m in self.representatives
            ]
        return doc


def _matmul_flat(a, b, n, q):
    """Product of two n x n matrices stored as flat int tuples, mod q."""
    out = [0] * (n * n)
    for i in range(n):
        ib = i * n
        for k in range(n):
            aik = a[ib + k]
            if aik:
                kb = k * n
                for j in range(n):
                    out[ib + j] += aik * b[kb + j]
    return [v % q for v in out]


def _reduces_to_zero(vec, basis, pivots, q):
    """Forward-eliminate against an echelon basis with unit pivots."""
    v = list(vec)
    for row, piv in zip(basis, pivots):
        c = v[piv]
        if c:
            v = [(x - c * y) % q for x, y in zip(v, row)]
    return not any(v)

def _census_cell_worker(args):
    """Process the echelon cells of one batch of pivot patterns; returns
    (searched, flat bases of the survivors)."""
    n, d, q, pivot_sets = args
    nn = n * n
    ident = tuple(1 if i == j else 0 for i in range(n) for j in range(n))
    searched = 0
    survivors = []
    qd = d - 1  # dimension in the quotient by the identity line
    for pivots in pivot_sets:
        pivset = set(pivots)
        free = []
        for r in range(qd):
            for c in range(pivots[r] + 1, nn - 1):
                if c not in pivset:
                    free.append((r, c))
        template = [[0] * (nn - 1) for _ in range(qd)]
        for r in range(qd):
            template[r][pivots[r]] = 1
        for assignment in product(range(q), repeat=len(free)):
            searched += 1
            rows = [row[:] for row in template]
            for (r, c), v in zip(free, assignment):
                rows[r][c] = v
            basis = [ident] + [tuple([0] + row) for row in rows]
            bpivots = [0] + [p + 1 for p in pivots]
            mats = basis
            closed = True
            for a in mats:
                for b in mats:
                    prod = _matmul_flat(a, b, n, q)
                    if not _reduces_to_zero(prod, basis, bpivots, q):
                        closed = False
                        break
                if not closed:
                    break
            if closed:
                survivors.append(tuple(basis))
    return searched, survivors


def enumerate_molds(
    n: int,
    d: int,
    q: int,
    with_representatives: bool = False,
    max_candidates: int = None,
    jobs: int = 1,
) -> MoldCensus:
    """Exhaustive census of rank-d molds in M_n(F_q), classified by
    detected parabolic type (bucket "other" collects the rest).

    Only subspaces containing the identity are ever generated (candidates
    correspond to (d-1)-dimensional subspaces of the quotient by the
    identity line). Candidate counts above the resource guard raise
    ResourceLimitError unless the guard is raised explicitly.
    """
    if not isinstance(q, int) or not is_prime(q):
        raise InputError(f"census field size must be prime, got {q!r}")
    if n < 1 or n > config.MAX_DEGREE:
        raise InputError(f"degree must be in [1, {config.MAX_DEGREE}], got {n}")
    if d < 1 or d > n * n:
        raise InputError(f"rank must be in [1, {n * n}], got {d}")
    nn = n * n
    candidates = gaussian_binomial(nn - 1, d - 1, q)
    limit = config.CENSUS_CANDIDATE_LIMIT if max_candidates is None else max_candidates
    if candidates > limit:
        raise ResourceLimitError(
            f"census would iterate {candidates} candidate subspaces "
            f"(limit {limit}); raise the limit to proceed",
            candidates,
        )
    pivot_sets = list(combinations(range(nn - 1), d - 1))
    jobs = max(1, int(jobs))
    if jobs == 1 or len(pivot_sets) <= 1:
        batches = [(n, d, q, pivot_sets)]
        results = [_census_cell_worker(b) for b in batches]
    else:
        chunks = [pivot_sets[k::jobs] for k in range(jobs)]
        batches = [(n, d, q, chunk) for chunk in chunks if chunk]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_census_cell_worker, batches))
    searched = sum(r[0] for r in results)
    survivor_bases = []
    for r in results:
        survivor_bases.extend(r[1])
    survivor_bases.sort()
    field = GF(q)
    by_type = {}
    reps = [] if with_representatives else None
    total = 0
    for basis in survivor_bases:
        span = rref([list(row) for row in basis], field, nn)
        mold = Mold(field, n, span)  # re-validates closure and the identity
        detected = parabolic_type(mold)
        label = detected[0].label() if detected is not None else "other"
        by_type[label] = by_type.get(label, 0) + 1
        total += 1
        if reps is not None:
            reps.append(mold)
    if reps is not None:
        reps.sort(key=lambda m: m.basis.basis)
    return MoldCensus(
        n=n,
        d=d,
        q=q,
        total=total,
        by_type=dict(sorted(by_type.items())),
        searched=searched,
        representatives=tuple(reps) if reps is not None else None,
    )
