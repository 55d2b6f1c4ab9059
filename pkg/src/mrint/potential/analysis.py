"""Order-1 and order-2 integrability analysis at a Darboux point.

For a potential V homogeneous of degree -1 and a point c with
grad V(c) = -c, the Hessian H = D^2 V(c) must have spectrum in
{(p-1)(p+2)/2 : p = 0, 1, 2, ...} (order 1).  If H is diagonalizable in a
complex-orthonormal basis X_1..X_n with indices p_i, then at order 2 every
coupling T_ijk = D^3 V(c)(X_i, X_j, X_k) whose table entry A[p_i,p_j,p_k] is
0 must vanish.

Two number modes run through the same code: exact (Fractions and Gaussian
rationals, exact zero tests) and floating (complex doubles with
tolerances).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from ..table import a_entry
from .expr import Expr, ParseError, PoleError, dimension, evaluate, max_variable_index, parse_expression, partial
from .gaussian import Gaussian, is_exact
from .linalg import (
    Eigenbasis,
    JordanBlock,
    JordanUnresolvable,
    NotDiagonalizable,
    bilinear,
    cluster_eigenvalues,
    exact_dot,
    exact_jordan_structure,
    exact_nullspace,
    exact_orthogonal_basis,
    exact_shift,
    jordan_cluster_radius,
    jordan_structure,
    orthonormal_eigenbasis,
)
from .ratfunc import RatFunc, euler_defect, from_expr

PV_FIELD_C = "ℂ(φ, φ̇, ln(1/2 + φ(1 + φ̇/√2)))"
PV_FIELD_C2 = "ℂ(φ, φ̇, ln(1/2 + φ(1 + φ̇/√2)), ln(φ))"


class NotHomogeneous(ValueError):
    def __init__(self, defect: RatFunc, degree: int | None):
        self.defect = defect
        self.degree = degree
        what = f"degree {degree}" if degree is not None else "not homogeneous"
        super().__init__(f"potential is not homogeneous of degree -1 ({what}); Euler defect sum q_i dV/dq_i + V = {defect}")


class NotDarbouxPoint(ValueError):
    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"not a Darboux point: residual |grad V(c) - alpha c| = {residual:.3g}")


class DegenerateMultiplier(ValueError):
    pass


class InconsistentDerivatives(ArithmeticError):
    pass


# -- potentials ---------------------------------------------------------------


@dataclass(frozen=True)
class PotentialExpr:
    text: str
    tree: Expr
    dimension: int
    rational: RatFunc

    def __call__(self, point):
        return evaluate(self.tree, point)


def parse_potential(text: str) -> PotentialExpr:
    tree = parse_expression(text)
    n = max(dimension(tree), max_variable_index(text))
    if n == 0:
        raise ParseError("potential has no variables")
    V = from_expr(tree, n)
    defect = euler_defect(V)
    if not defect.is_zero():
        raise NotHomogeneous(defect, V.homogeneous_degree())
    return PotentialExpr(text, tree, n, V)


# -- derivatives ----------------------------------------------------------------


@dataclass(frozen=True)
class Derivatives:
    gradient: np.ndarray
    hessian: np.ndarray
    third: np.ndarray
    exact: bool


def _point_exact(c: Sequence) -> bool:
    return all(is_exact(x) for x in c)


def derivatives_at(V: PotentialExpr, c: Sequence, method: str = "tree") -> Derivatives:
    """Gradient, Hessian and third-derivative tensor of V at c.

    ``method="tree"`` differentiates the expression tree with caching;
    ``method="rational"`` uses the quotient-rule representation and serves
    as an independent cross-check.  Exact inputs give exact outputs.
    """
    n = V.dimension
    if len(c) != n:
        raise ValueError(f"point has {len(c)} components, potential has {n} variables")
    exact = _point_exact(c)
    point = list(c) if exact else [complex(x) for x in c]
    dtype = object if exact else complex
    grad = np.empty(n, dtype=dtype)
    hess = np.empty((n, n), dtype=dtype)
    third = np.empty((n, n, n), dtype=dtype)
    memo: dict = {}
    cache: dict = {}

    def value(idx: tuple[int, ...]):
        if method == "tree":
            return evaluate(partial(V.tree, tuple(i + 1 for i in idx)), point, memo)
        R = V.rational
        for m in range(1, len(idx) + 1):
            if idx[:m] not in cache:
                cache[idx[:m]] = R.derivative(idx[m - 1] + 1)
            R = cache[idx[:m]]
        return R(point)

    try:
        for a in range(n):
            grad[a] = value((a,))
        for a, b in combinations_with_replacement(range(n), 2):
            hess[a, b] = hess[b, a] = value((a, b))
        for a, b, d in combinations_with_replacement(range(n), 3):
            v = value((a, b, d))
            for p in {(a, b, d), (a, d, b), (b, a, d), (b, d, a), (d, a, b), (d, b, a)}:
                third[p] = v
    except ZeroDivisionError as exc:
        raise PoleError(f"V or a derivative has a pole at the point: {exc}") from None
    return Derivatives(grad, hess, third, exact)


# -- Darboux points ----------------------------------------------------------------


@dataclass(frozen=True)
class DarbouxPoint:
    c: tuple
    multiplier: object
    residual: float
    exact: bool


def _residual(g: np.ndarray, alpha, c) -> float:
    return float(max(abs(complex(gi - alpha * ci)) for gi, ci in zip(g, c)))


def verify_darboux(V: PotentialExpr, c: Sequence, tolerance: float = 1e-9) -> DarbouxPoint:
    """Check grad V(c) = alpha c and return the multiplier alpha."""
    c = tuple(c)
    if all(complex(x) == 0 for x in c):
        raise ValueError("c must be nonzero")
    exact = _point_exact(c)
    vals = list(c) if exact else [complex(x) for x in c]
    d = derivatives_at(V, vals)
    g = d.gradient
    if exact:
        cc = exact_dot(vals, vals)
        if cc != 0:
            alpha = exact_dot(g, vals) / cc
        else:
            # isotropic c: take the ratio at the largest component
            k = max(range(len(vals)), key=lambda i: abs(complex(vals[i])))
            alpha = g[k] / vals[k]
        if isinstance(alpha, Gaussian):
            alpha = alpha.simplify()
        residual = _residual(g, alpha, vals)
        exact = all(gi - alpha * ci == 0 for gi, ci in zip(g, vals))
    else:
        cv = np.array(vals)
        gv = g.astype(complex)
        # Hermitian least squares: minimizes |g - alpha c|
        alpha = complex(np.vdot(cv, gv) / np.vdot(cv, cv))
        residual = _residual(gv, alpha, cv)
    if residual > tolerance * max(1.0, float(np.max(np.abs(np.array([complex(x) for x in g]))))):
        raise NotDarbouxPoint(residual)
    if complex(alpha) == 0 or abs(complex(alpha)) <= tolerance:
        raise DegenerateMultiplier("multiplier alpha = 0: degenerate Darboux point")
    return DarbouxPoint(tuple(vals), alpha, residual, exact)


def _icbrt(n: int) -> int | None:
    """Integer cube root if n is a perfect cube."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    r = int(round(n ** (1 / 3))) if n < 2**60 else 1 << ((n.bit_length() + 2) // 3)
    # Newton polish for large values
    for _ in range(200):
        nr = (2 * r + n // (r * r)) // 3 if r else 0
        if nr >= r:
            break
        r = nr
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**3 == n:
            return sign * cand
    return None


def exact_cube_root(x) -> Fraction | None:
    if isinstance(x, Gaussian):
        if x.im:
            return None
        x = x.re
    x = Fraction(x)
    p, q = _icbrt(x.numerator), _icbrt(x.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)


def cube_root_scale(alpha, branch: int = 0):
    """s with s^3 = -alpha: real root when -alpha is real, else principal.

    ``branch`` multiplies by a power of the primitive cube root of unity.
    """
    target = -alpha
    if branch % 3 == 0:
        exact = exact_cube_root(target) if is_exact(target) else None
        if exact is not None:
            return exact
    z = complex(target)
    if z.imag == 0:
        s = complex(math.copysign(abs(z.real) ** (1 / 3), z.real))
    else:
        s = z ** (1 / 3)
    return s * cmath.exp(2j * math.pi * branch / 3)


def normalize_multiplier(V: PotentialExpr, d: DarbouxPoint, tolerance: float = 1e-9, branch: int = 0) -> DarbouxPoint:
    """Rescale c so that the multiplier becomes -1."""
    if complex(d.multiplier) == 0:
        raise DegenerateMultiplier("multiplier alpha = 0: degenerate Darboux point")
    s = cube_root_scale(d.multiplier, branch)
    c = tuple(s * x for x in d.c)
    if not _point_exact(c):
        c = tuple(complex(x) for x in c)
    out = verify_darboux(V, c, tolerance)
    if abs(complex(out.multiplier) + 1) > max(tolerance, 1e3 * out.residual) * 10:
        raise ArithmeticError(f"normalization produced multiplier {out.multiplier}")
    if out.exact and out.multiplier != -1:
        raise ArithmeticError(f"normalization produced multiplier {out.multiplier}")
    return out


# -- spectrum ---------------------------------------------------------------------


def eigenvalue_of_index(p: int) -> Fraction:
    return Fraction((p - 1) * (p + 2), 2)


def p_index(lam, int_tolerance: float = 1e-6) -> int | None:
    """p >= 0 with lam = (p-1)(p+2)/2, or None."""
    z = complex(lam)
    if abs(z.imag) > int_tolerance:
        return None
    disc = 9 + 8 * z.real
    if disc < -int_tolerance:
        return None
    p = (-1 + math.sqrt(max(disc, 0.0))) / 2
    k = round(p)
    if k < 0 or abs(p - k) > int_tolerance:
        return None
    if is_exact(lam) and lam != eigenvalue_of_index(k):
        return None
    return k


def spectrum_indices(eigenvalues: Sequence, int_tolerance: float = 1e-6) -> tuple[list[int | None], list]:
    """p-indices and the eigenvalues for which none exists."""
    ps = [p_index(l, int_tolerance) for l in eigenvalues]
    bad = [l for l, p in zip(eigenvalues, ps) if p is None]
    return ps, bad


@dataclass
class Spectrum:
    """Eigen-data at a Darboux point.

    ``vectors`` holds complex-orthonormal columns X_i.  In exact mode the
    eigenvalues are Fractions and ``exact_vectors`` are bilinear-orthogonal
    but unnormalized.
    """

    eigenvalues: list
    vectors: np.ndarray
    p_indices: list[int | None]
    exact: bool = False
    exact_vectors: list[list] | None = None
    orthonormality_error: float = 0.0
    offdiagonal_error: float = 0.0


def _to_complex_matrix(M: np.ndarray) -> np.ndarray:
    return np.vectorize(complex, otypes=[complex])(M) if M.dtype == object else M.astype(complex)


def _exact_spectrum(H: np.ndarray, c: Sequence, numeric: np.ndarray, int_tolerance: float) -> Spectrum | None:
    """Exact eigen-decomposition when every eigenvalue is some (p-1)(p+2)/2."""
    n = H.shape[0]
    Hl = [[H[a, b] for b in range(n)] for a in range(n)]
    cands: dict[Fraction, int] = {}
    for idx in cluster_eigenvalues(numeric, 1e-5 * max(1.0, float(np.max(np.abs(_to_complex_matrix(H)))))):
        p = p_index(complex(np.mean(numeric[idx])), int_tolerance)
        if p is None:
            return None
        lam = eigenvalue_of_index(p)
        cands[lam] = cands.get(lam, 0) + len(idx)
    spaces = {lam: exact_nullspace(exact_shift(Hl, lam)) for lam in cands}
    if sum(len(b) for b in spaces.values()) != n:
        raise NotDiagonalizable("exact eigenspaces do not span")
    c = list(c)
    blocks = []
    for lam, basis in spaces.items():
        lead = c if lam == 2 and exact_dot(c, c) != 0 and _in_span(c, basis) else None
        vecs = exact_orthogonal_basis(basis, lead)
        blocks.append((lead is None, -lam, lam, vecs))
    blocks.sort(key=lambda b: b[:2])
    eig, vecs = [], []
    for _, _, lam, vs in blocks:
        eig += [lam] * len(vs)
        vecs += vs
    cols = [np.array([complex(x) for x in v]) / cmath.sqrt(complex(exact_dot(v, v))) for v in vecs]
    P = np.column_stack(cols)
    Hc = _to_complex_matrix(H)
    D = P.T @ Hc @ P
    return Spectrum(
        eig,
        P,
        [p_index(l) for l in eig],
        True,
        vecs,
        float(np.max(np.abs(P.T @ P - np.eye(n)))),
        float(np.max(np.abs(D - np.diag(np.diag(D))))),
    )


def _in_span(v: list, basis: list[list]) -> bool:
    from .linalg import exact_rank

    return exact_rank(basis + [v]) == len(basis)


def compute_spectrum(
    H: np.ndarray, c: Sequence, tolerance: float = 1e-9, int_tolerance: float = 1e-6, exact: bool = False
) -> Spectrum:
    """Complex-orthonormal eigenbasis with X_1 along c when possible."""
    Hc = _to_complex_matrix(H)
    numeric = np.linalg.eigvals(Hc)
    if exact:
        spec = _exact_spectrum(H, c, numeric, int_tolerance)
        if spec is not None:
            return spec
    basis: Eigenbasis = orthonormal_eigenbasis(Hc, tolerance, align=np.array([complex(x) for x in c]))
    eig = list(basis.eigenvalues)
    ps, _ = spectrum_indices(eig, int_tolerance)
    return Spectrum(eig, basis.vectors, ps, False, None, basis.orthonormality_error, basis.offdiagonal_error)


# -- couplings and verdicts ----------------------------------------------------------


def coupling_tensor(third: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """T_ijk = D^3 V(c)(X_i, X_j, X_k)."""
    D = _to_complex_matrix(third)
    return np.einsum("abc,ai,bj,ck->ijk", D, vectors, vectors, vectors)


def exact_coupling_tensor(third: np.ndarray, vectors: list[list]) -> dict[tuple[int, int, int], object]:
    """Unnormalized exact couplings on sorted eigen-index triples (0-based)."""
    n = len(vectors)
    # contract one slot at a time to keep this O(n^4)
    out = {}
    m = third.shape[0]
    first = [[[sum((third[a, b, d] * vectors[i][a] for a in range(m)), 0) for d in range(m)] for b in range(m)] for i in range(n)]
    for i in range(n):
        for j in range(i, n):
            second = [sum((first[i][b][d] * vectors[j][b] for b in range(m)), 0) for d in range(m)]
            for k in range(j, n):
                out[(i, j, k)] = sum((second[d] * vectors[k][d] for d in range(m)), 0)
    return out


def _exact_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    return Fraction(p, q) if p * p == x.numerator and q * q == x.denominator else None


def normalized_exact_value(spectrum: Spectrum, exact_T: dict, key: tuple[int, int, int]):
    """T_ijk for unit vectors, exact when the bilinear norms allow it."""
    raw = exact_T[tuple(sorted(key))]
    g = Fraction(1)
    for i in key:
        v = spectrum.exact_vectors[i]
        gi = exact_dot(v, v)
        if isinstance(gi, Gaussian):
            return None
        g *= Fraction(gi)
    r = _exact_sqrt(g)
    if r is None or isinstance(raw, Gaussian) and raw.im:
        return None
    return Fraction(raw if not isinstance(raw, Gaussian) else raw.re) / r


@dataclass(frozen=True)
class Violation:
    i: int  # 1-based eigen-indices
    j: int
    k: int
    p_triple: tuple[int, int, int]
    value: object  # Fraction when known exactly, else complex


@dataclass
class Order2Result:
    passed: bool
    violations: list[Violation] = field(default_factory=list)


def tensor_scale(third: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(_to_complex_matrix(third))))) if third.size else 1.0


def _nonzero(spectrum: Spectrum, T: np.ndarray, exact_T: dict | None, key: tuple[int, int, int], tol: float) -> bool:
    if exact_T is not None:
        return exact_T[tuple(sorted(key))] != 0
    return abs(T[key]) > tol


def order2_verdict(
    spectrum: Spectrum, T: np.ndarray, tolerance: float = 1e-9, exact_T: dict | None = None, scale: float = 1.0
) -> Order2Result:
    """Every coupling with table entry 0 must vanish."""
    ps = spectrum.p_indices
    if any(p is None for p in ps):
        raise ValueError("order-2 analysis needs a passing order-1 spectrum")
    tol = tolerance * scale
    out = []
    n = len(ps)
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                if a_entry(ps[i], ps[j], ps[k]):
                    continue
                if _nonzero(spectrum, T, exact_T, (i, j, k), tol):
                    value = normalized_exact_value(spectrum, exact_T, (i, j, k)) if exact_T is not None else None
                    # the sign of an exact value follows sqrt of positive norms, so match the float sign
                    if value is not None and complex(T[i, j, k]).real * float(value) < 0:
                        value = -value
                    value = complex(T[i, j, k]) if value is None else value
                    out.append(Violation(i + 1, j + 1, k + 1, tuple(sorted((ps[i], ps[j], ps[k]))), value))
    return Order2Result(not out, out)


@dataclass
class EulerCheck:
    passed: bool
    max_defect: float
    eigenvalue_two: bool
    hessian_c_defect: float
    messages: list[str] = field(default_factory=list)


def euler_consistency(spectrum: Spectrum, T: np.ndarray, c: Sequence, hessian: np.ndarray, tolerance: float = 1e-9, scale: float = 1.0) -> EulerCheck:
    """Homogeneity consequences: H c = 2c and T_1ab = -3 lam_a delta_ab / sqrt(<c,c>)."""
    cv = np.array([complex(x) for x in c])
    Hc = _to_complex_matrix(hessian)
    msgs = []
    hdef = float(np.max(np.abs(Hc @ cv - 2 * cv)))
    two = any(abs(complex(l) - 2) <= 1e-6 for l in spectrum.eigenvalues)
    if not two:
        msgs.append("eigenvalue 2 missing from the spectrum")
    if hdef > tolerance * max(1.0, float(np.max(np.abs(Hc)))) * max(1.0, float(np.max(np.abs(cv)))):
        msgs.append(f"H c != 2 c (defect {hdef:.3g})")
    norm = cmath.sqrt(bilinear(cv, cv))
    X1 = spectrum.vectors[:, 0] if spectrum.vectors.size else cv
    worst = 0.0
    if abs(norm) > 1e-12 and np.allclose(X1 * norm, cv, atol=1e-8 * max(1.0, float(np.max(np.abs(cv))))):
        lam = np.array([complex(l) for l in spectrum.eigenvalues])
        expected = -3 * np.diag(lam) / norm
        worst = float(np.max(np.abs(T[0] - expected)))
        if worst > tolerance * scale * 10:
            msgs.append(f"T_1ab differs from -3 lam_a delta_ab/|c| by {worst:.3g}")
    else:
        msgs.append("X_1 is not aligned with c; T_1ab check skipped")
    passed = not [m for m in msgs if "skipped" not in m]
    return EulerCheck(passed, worst, two, hdef, msgs)


def galois_class(spectrum: Spectrum, T: np.ndarray, tolerance: float = 1e-9, exact_T: dict | None = None, scale: float = 1.0) -> tuple[str, str]:
    """``"C"`` or ``"C2"`` with the matching Picard-Vessiot field."""
    ps = spectrum.p_indices
    tol = tolerance * scale
    minus_one = [i for i, p in enumerate(ps) if p == 0]
    zero = [i for i, p in enumerate(ps) if p == 1]
    hit = False
    for a, b, d in combinations_with_replacement(minus_one, 3):
        hit = hit or _nonzero(spectrum, T, exact_T, (a, b, d), tol)
    for a, b in combinations_with_replacement(minus_one, 2):
        for w in zero:
            hit = hit or _nonzero(spectrum, T, exact_T, (a, b, w), tol)
    return ("C2", PV_FIELD_C2) if hit else ("C", PV_FIELD_C)


@dataclass
class JordanResult:
    status: str  # "pass", "fail" or "unresolvable"
    blocks: list[JordanBlock]
    reason: str = ""


def _show(z) -> str:
    z = complex(z)
    re, im = round(z.real, 9) + 0.0, round(z.imag, 9) + 0.0
    return f"{re:.6g}" if not im else f"{re:.6g}{im:+.6g}i"


def jordan_verdict(H: np.ndarray, tolerance: float = 1e-9, int_tolerance: float = 1e-6, exact: bool = False) -> JordanResult:
    """Order-1 test for non-diagonalizable Hessians.

    Passes iff every eigenvalue is some (p-1)(p+2)/2 and every nontrivial
    Jordan block sits at eigenvalue -1 with size at most 2.
    """
    Hc = _to_complex_matrix(H)
    try:
        numeric = np.linalg.eigvals(Hc)
        blocks = None
        if exact:
            eig: dict = {}
            ok = True
            radius = jordan_cluster_radius(H.shape[0]) * max(1.0, float(np.max(np.abs(Hc))))
            for idx in cluster_eigenvalues(numeric, radius):
                p = p_index(complex(np.mean(numeric[idx])), int_tolerance)
                if p is None:
                    ok = False
                    break
                lam = eigenvalue_of_index(p)
                eig[lam] = eig.get(lam, 0) + len(idx)
            if ok:
                n = H.shape[0]
                blocks = exact_jordan_structure([[H[a, b] for b in range(n)] for a in range(n)], eig)
        if blocks is None:
            blocks = jordan_structure(Hc, tolerance)
    except JordanUnresolvable as exc:
        return JordanResult("unresolvable", [], str(exc))
    bad = [b for b in blocks if p_index(b.eigenvalue, int_tolerance) is None]
    if bad:
        return JordanResult("fail", blocks, f"eigenvalue {_show(bad[0].eigenvalue)} is not (p-1)(p+2)/2")
    for b in blocks:
        if b.size >= 2 and p_index(b.eigenvalue, int_tolerance) != 0:
            return JordanResult("fail", blocks, f"Jordan block of size {b.size} at eigenvalue {_show(b.eigenvalue)}")
        if b.size > 2:
            return JordanResult("fail", blocks, f"Jordan block of size {b.size} at eigenvalue -1")
    return JordanResult("pass", blocks, "size <= 2 at eigenvalue -1 (interpretation of the block-size bound)")


@dataclass
class FastPath:
    applies: bool
    B: list[int]
    reason: str = ""


def fastpath_corollary(p_indices: Sequence[int | None]) -> FastPath:
    """Shortcut: order 2 passes when, after removing one p = 2, all p are even
    with halves B satisfying max(B) <= max(2 min(B) - 1, 0)."""
    ps = list(p_indices)
    if any(p is None for p in ps):
        return FastPath(False, [], "order-1 spectrum fails")
    if 2 not in ps:
        return FastPath(False, [], "eigenvalue 2 absent")
    ps.remove(2)
    if any(p % 2 for p in ps):
        return FastPath(False, [], "odd index present")
    B = sorted({p // 2 for p in ps})
    if not B:
        return FastPath(True, B)
    ok = max(B) <= max(2 * min(B) - 1, 0)
    return FastPath(ok, B, "" if ok else f"max(B) = {max(B)} > max(2 min(B) - 1, 0)")
