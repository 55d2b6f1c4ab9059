"""Complex-orthonormal diagonalization of complex symmetric matrices.

Orthonormality is for the bilinear form ``<v, w> = sum v_k w_k`` (no
conjugation).  A diagonalizable complex symmetric matrix always has such a
basis, but individual eigenvectors can be isotropic (``<v, v> = 0``); inside
an eigenspace those are repaired by replacing a pair ``v, w`` with
``v + w, v - w``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class NotDiagonalizable(ArithmeticError):
    pass


class DegenerateBilinearForm(NotDiagonalizable):
    """An eigenspace is degenerate for the bilinear form.

    Eigenspaces of a diagonalizable symmetric matrix never are, so this is a
    non-diagonalizability certificate (up to the numerical threshold).
    """

    def __init__(self, message: str, condition: float):
        super().__init__(f"{message} (condition number {condition:.3g})")
        self.condition = condition


class JordanUnresolvable(ArithmeticError):
    pass


ISOTROPY_THRESHOLD = 1e-8


def bilinear(v: np.ndarray, w: np.ndarray) -> complex:
    return complex(np.sum(v * w))


@dataclass
class Eigenbasis:
    """Eigenvalues and columns ``X_i`` of ``P`` with ``P^T P = I``."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    clusters: list[list[int]] = field(default_factory=list)
    orthonormality_error: float = 0.0
    offdiagonal_error: float = 0.0


def _scale(H: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(H))) if H.size else 1.0)


def check_symmetric(H: np.ndarray, tolerance: float) -> None:
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("matrix must be square")
    if np.max(np.abs(H - H.T), initial=0.0) > tolerance * _scale(H):
        raise ValueError("matrix is not symmetric")


def cluster_eigenvalues(values: np.ndarray, tolerance: float) -> list[list[int]]:
    """Group indices of numerically equal eigenvalues (single linkage)."""
    n = len(values)
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(n):
        for b in range(a + 1, n):
            if abs(values[a] - values[b]) <= tolerance:
                parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for a in range(n):
        groups.setdefault(find(a), []).append(a)
    return list(groups.values())


def _null_basis(M: np.ndarray, dim: int, tolerance: float) -> np.ndarray:
    """Orthonormal (Hermitian) basis of the numerical kernel, if it has ``dim`` directions."""
    _, s, vh = np.linalg.svd(M)
    null = int(np.sum(s <= tolerance))
    if null < dim:
        raise NotDiagonalizable(f"eigenspace of dimension {null} for multiplicity {dim}")
    return vh[-dim:].conj().T


def _bilinear_gram_schmidt(vectors: list[np.ndarray], count: int, threshold: float) -> list[np.ndarray]:
    """``count`` vectors orthonormal for the bilinear form, spanning the input.

    The first input vector is kept as the first output direction when it is
    not isotropic; the rest are chosen by pivoting on ``|<v,v>| / |v|^2``.
    """
    out: list[np.ndarray] = []
    pool = [v / np.linalg.norm(v) for v in vectors]
    first = True
    while len(out) < count:
        pool = [v - sum(bilinear(x, v) * x for x in out) for v in pool]
        pool = [v / np.linalg.norm(v) for v in pool if np.linalg.norm(v) > 1e-8]
        if not pool:
            raise DegenerateBilinearForm("eigenspace exhausted", float("inf"))
        ratios = [abs(bilinear(v, v)) for v in pool]
        pick = 0 if first and ratios[0] >= threshold else int(np.argmax(ratios))
        first = False
        if ratios[pick] >= threshold:
            v = pool.pop(pick)
            out.append(v / np.sqrt(bilinear(v, v)))
            continue
        # every candidate is isotropic: pair two with a nonzero cross term
        best, pair = 0.0, None
        for a in range(len(pool)):
            for b in range(a + 1, len(pool)):
                g = abs(bilinear(pool[a], pool[b]))
                if g > best:
                    best, pair = g, (a, b)
        if pair is None or best < threshold:
            raise DegenerateBilinearForm("isotropic eigenspace without a pairing partner", 1.0 / max(best, 1e-300))
        a, b = pair
        va, vb = pool[a], pool[b]
        pool[a], pool[b] = va + vb, va - vb
    return out


def orthonormal_eigenbasis(
    H,
    tolerance: float = 1e-9,
    align: np.ndarray | None = None,
    align_eigenvalue: complex = 2.0,
    cluster_tolerance: float = 1e-5,
) -> Eigenbasis:
    """Diagonalize a complex symmetric matrix in a complex-orthonormal basis.

    When ``align`` lies in the eigenspace of ``align_eigenvalue`` it becomes
    ``X_1`` (normalized by its bilinear norm).  Raises
    :class:`NotDiagonalizable` when an eigenspace is too small.
    """
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    check_symmetric(H, tolerance)
    scale = _scale(H)
    values = np.linalg.eigvals(H)
    clusters = cluster_eigenvalues(values, cluster_tolerance * scale)
    null_tol = max(1e-7 * scale, 10 * tolerance * scale)

    blocks = []
    for idx in clusters:
        mu = complex(np.mean(values[idx]))
        B = _null_basis(H - mu * np.eye(n), len(idx), null_tol)
        seeds = [B[:, a] for a in range(B.shape[1])]
        aligned = False
        if align is not None and abs(mu - align_eigenvalue) <= cluster_tolerance * scale:
            c = np.asarray(align, dtype=complex)
            # keep c only if it lies in this eigenspace
            if np.linalg.norm(c - B @ (B.conj().T @ c)) <= 1e-6 * np.linalg.norm(c):
                if abs(bilinear(c, c)) >= ISOTROPY_THRESHOLD * np.linalg.norm(c) ** 2:
                    seeds = [c] + seeds
                    aligned = True
        vecs = _bilinear_gram_schmidt(seeds, len(idx), ISOTROPY_THRESHOLD)
        if aligned:
            c = seeds[0]
            vecs[0] = c / np.sqrt(bilinear(c, c))
        blocks.append((aligned, mu, vecs))

    # aligned block first, then by decreasing real part, then imaginary part
    blocks.sort(key=lambda b: (not b[0], -round(b[1].real, 9), -round(b[1].imag, 9)))
    cols, out_clusters = [], []
    for _, _, vecs in blocks:
        out_clusters.append(list(range(len(cols), len(cols) + len(vecs))))
        cols.extend(vecs)
    P = np.column_stack(cols) if cols else np.zeros((0, 0), dtype=complex)
    D = P.T @ H @ P
    eig = np.diag(D).copy()
    ortho = float(np.max(np.abs(P.T @ P - np.eye(n)), initial=0.0))
    off = float(np.max(np.abs(D - np.diag(eig)), initial=0.0))
    return Eigenbasis(eig, P, out_clusters, ortho, off)


# -- exact linear algebra over Q and Q(i) -------------------------------------


def _is_zero(x) -> bool:
    return x == 0


def row_reduce(M: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over an exact field; returns (R, pivot columns)."""
    R = [list(r) for r in M]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((k for k in range(r, rows) if not _is_zero(R[k][c])), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for k in range(rows):
            if k != r and not _is_zero(R[k][c]):
                f = R[k][c]
                R[k] = [a - f * b for a, b in zip(R[k], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def exact_rank(M: list[list]) -> int:
    return len(row_reduce(M)[1])


def exact_nullspace(M: list[list]) -> list[list]:
    R, pivots = row_reduce(M)
    n = len(M[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, p in enumerate(pivots):
            v[p] = -R[r][f]
        basis.append(v)
    return basis


def exact_shift(H: list[list], lam) -> list[list]:
    n = len(H)
    return [[H[a][b] - (lam if a == b else 0) for b in range(n)] for a in range(n)]


def exact_matmul(A: list[list], B: list[list]) -> list[list]:
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), 0) for j in range(len(B[0]))] for i in range(len(A))]


def exact_dot(v, w):
    return sum((a * b for a, b in zip(v, w)), 0)


def exact_orthogonal_basis(vectors: list[list], first=None) -> list[list]:
    """Bilinear-orthogonal (not normalized) basis of the span, exact arithmetic.

    Isotropic leftovers are paired by sum and difference exactly as in the
    floating version.  ``first`` (if non-isotropic and in the span) leads.
    """
    pool = ([list(first)] if first is not None else []) + [list(v) for v in vectors]
    target = len(vectors)
    out: list[list] = []
    while len(out) < target:
        reduced = []
        for v in pool:
            for x in out:
                f = exact_dot(x, v) / exact_dot(x, x)
                v = [a - f * b for a, b in zip(v, x)]
            if any(not _is_zero(a) for a in v):
                reduced.append(v)
        pool = reduced
        if not pool:
            raise DegenerateBilinearForm("eigenspace exhausted", float("inf"))
        k = next((k for k, v in enumerate(pool) if not _is_zero(exact_dot(v, v))), None)
        if k is not None:
            out.append(pool.pop(k))
            continue
        pair = next(
            ((a, b) for a in range(len(pool)) for b in range(a + 1, len(pool)) if not _is_zero(exact_dot(pool[a], pool[b]))),
            None,
        )
        if pair is None:
            raise DegenerateBilinearForm("totally isotropic eigenspace", float("inf"))
        a, b = pair
        va, vb = pool[a], pool[b]
        pool[a] = [x + y for x, y in zip(va, vb)]
        pool[b] = [x - y for x, y in zip(va, vb)]
    return out


# -- Jordan structure ---------------------------------------------------------


@dataclass(frozen=True)
class JordanBlock:
    eigenvalue: complex
    size: int


def _numeric_rank(M: np.ndarray, tolerance: float) -> int:
    s = np.linalg.svd(M, compute_uv=False)
    # refuse to decide when a singular value sits near the threshold
    gray = (s > tolerance * 1e-3) & (s < tolerance * 1e3)
    if np.any(gray):
        raise JordanUnresolvable(f"singular values {s[gray]} too close to the rank threshold {tolerance:g}")
    return int(np.sum(s > tolerance))


def block_sizes_from_ranks(ranks: list[int]) -> list[int]:
    """Jordan block sizes for one eigenvalue from ``rank (H - lam)^k``, k = 0, 1, ..."""
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes = []
    for k in range(len(at_least)):
        nxt = at_least[k + 1] if k + 1 < len(at_least) else 0
        sizes += [k + 1] * (at_least[k] - nxt)
    return sorted(sizes, reverse=True)


def jordan_cluster_radius(n: int) -> float:
    """Relative radius that keeps the eigenvalues of a perturbed n-block together."""
    return max(1e-5, 10 * float(np.finfo(float).eps) ** (1 / max(n, 1)))


def jordan_structure(H, tolerance: float = 1e-9, cluster_tolerance: float | None = None) -> list[JordanBlock]:
    """Numerical Jordan blocks from rank sequences of ``(H - lam I)^k``.

    Rounding splits a block of size m into eigenvalues about ``u^(1/m)``
    apart, so the default clustering radius allows for a block of size n.
    """
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    scale = _scale(H)
    values = np.linalg.eigvals(H)
    if cluster_tolerance is None:
        cluster_tolerance = jordan_cluster_radius(n)
    blocks: list[JordanBlock] = []
    for idx in cluster_eigenvalues(values, cluster_tolerance * scale):
        mu = complex(np.mean(values[idx]))
        m = len(idx)
        A = H - mu * np.eye(n)
        ranks = [n]
        Ak = np.eye(n, dtype=complex)
        for k in range(1, m + 1):
            Ak = Ak @ A
            ranks.append(_numeric_rank(Ak, max(1e-7, 10 * tolerance) * scale**k))
        if n - ranks[-1] != m:
            raise JordanUnresolvable(f"generalized eigenspace at {mu:.6g} has dimension {n - ranks[-1]}, expected {m}")
        blocks += [JordanBlock(mu, s) for s in block_sizes_from_ranks(ranks)]
    return blocks


def exact_jordan_structure(H: list[list], eigenvalues: dict) -> list[JordanBlock]:
    """Jordan blocks for exactly known eigenvalues ``{lam: algebraic multiplicity}``."""
    n = len(H)
    blocks: list[JordanBlock] = []
    for lam, m in eigenvalues.items():
        A = exact_shift(H, lam)
        ranks = [n]
        Ak = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
        for _ in range(m):
            Ak = exact_matmul(Ak, A)
            ranks.append(exact_rank(Ak))
        if n - ranks[-1] != m:
            raise JordanUnresolvable(f"generalized eigenspace at {lam} has dimension {n - ranks[-1]}, expected {m}")
        blocks += [JordanBlock(complex(lam), s) for s in block_sizes_from_ranks(ranks)]
    return blocks
