"""Integer lattices in Z^n: kernels of (mixed plain/modular) integer systems."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatch

INFINITE = "infinite"


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def row_echelon(rows: Sequence[Sequence[int]], ncols: int, companion=None):
    """Integer row-echelon form by unimodular row operations.

    Returns ``(echelon_rows, companion_rows)`` where zero rows are kept at the
    bottom.  ``companion`` rows, if given, receive the same row operations.
    """
    A = [list(r) for r in rows]
    C = [list(r) for r in companion] if companion is not None else None
    r0 = 0
    for col in range(ncols):
        # bring a gcd of column entries into row r0
        for r in range(r0 + 1, len(A)):
            if A[r][col] == 0:
                continue
            a, b = A[r0][col], A[r][col]
            g, x, y = _xgcd(a, b)
            ua, ub = a // g, b // g
            new0 = [x * p + y * q for p, q in zip(A[r0], A[r])]
            newr = [-ub * p + ua * q for p, q in zip(A[r0], A[r])]
            A[r0], A[r] = new0, newr
            if C is not None:
                c0 = [x * p + y * q for p, q in zip(C[r0], C[r])]
                cr = [-ub * p + ua * q for p, q in zip(C[r0], C[r])]
                C[r0], C[r] = c0, cr
        if r0 < len(A) and A[r0][col] != 0:
            if A[r0][col] < 0:
                A[r0] = [-v for v in A[r0]]
                if C is not None:
                    C[r0] = [-v for v in C[r0]]
            # reduce the rows above (Hermite normal form)
            p = A[r0][col]
            for r in range(r0):
                f = A[r][col] // p
                if f:
                    A[r] = [u - f * v for u, v in zip(A[r], A[r0])]
                    if C is not None:
                        C[r] = [u - f * v for u, v in zip(C[r], C[r0])]
            r0 += 1
    return A, C


@dataclass(frozen=True)
class SubgroupBasis:
    generators: tuple[tuple[int, ...], ...]
    n: int
    index: int | str

    @property
    def rank(self) -> int:
        return len(self.generators)

    def to_json(self) -> dict:
        return {"generators": [list(g) for g in self.generators], "index": self.index}


def subgroup_from_generators(gens: Sequence[Sequence[int]], n: int) -> SubgroupBasis:
    """Reduce a generating set of a subgroup of Z^n to a Hermite basis."""
    for g in gens:
        if len(g) != n:
            raise DimensionMismatch(f"generator {tuple(g)} has length {len(g)}, expected {n}")
    ech, _ = row_echelon(gens, n)
    basis = tuple(tuple(r) for r in ech if any(r))
    if len(basis) == n:
        det = 1
        for i, r in enumerate(basis):
            det *= r[i]
        index: int | str = abs(det)
    else:
        index = INFINITE
    return SubgroupBasis(basis, n, index)


def smith_kernel(relations: Sequence[Sequence[int]], n: int,
                 moduli: Sequence[int | None] | None = None) -> SubgroupBasis:
    """Basis of {v in Z^n : r.v = 0 for plain rows, r.v = 0 mod M for modular rows}.

    Each modular row (r, M) gets an auxiliary unknown t with r.v - M t = 0;
    the integer kernel of the stacked system is projected onto the first n
    coordinates.
    """
    moduli = list(moduli) if moduli is not None else [None] * len(relations)
    if len(moduli) != len(relations):
        raise DimensionMismatch("one modulus entry per relation row is required")
    for r in relations:
        if len(r) != n:
            raise DimensionMismatch(f"relation {tuple(r)} has length {len(r)}, expected {n}")
    for M in moduli:
        if M is not None and M < 2:
            raise ValueError(f"moduli must be >= 2, got {M}")
    aux = [k for k, M in enumerate(moduli) if M is not None]
    N = n + len(aux)
    A = []
    for k, (r, M) in enumerate(zip(relations, moduli)):
        row = list(r) + [0] * len(aux)
        if M is not None:
            row[n + aux.index(k)] = -M
        A.append(row)
    # kernel via column operations: row-reduce A^T alongside the identity
    At = [[A[i][j] for i in range(len(A))] for j in range(N)]
    ident = [[1 if i == j else 0 for j in range(N)] for i in range(N)]
    ech, comp = row_echelon(At, len(A), ident)
    kernel = [comp[i] for i in range(N) if not any(ech[i])]
    return subgroup_from_generators([k[:n] for k in kernel], n)


def subgroup_membership(v: Sequence[int], S: SubgroupBasis) -> bool:
    if len(v) != S.n:
        raise DimensionMismatch(f"vector of length {len(v)} against rank-{S.n} lattice")
    ech, _ = row_echelon(S.generators, S.n)
    w = list(v)
    for r in ech:
        if not any(r):
            continue
        p = next(i for i, x in enumerate(r) if x)
        if w[p] % r[p]:
            return False
        f = w[p] // r[p]
        w = [a - f * b for a, b in zip(w, r)]
    return not any(w)
