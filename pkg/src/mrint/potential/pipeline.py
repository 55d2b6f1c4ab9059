"""Full analysis of one potential at one or more candidate Darboux points."""

from __future__ import annotations

import time
from typing import Sequence

import numpy as np

from .analysis import (
    PotentialExpr,
    Spectrum,
    compute_spectrum,
    coupling_tensor,
    derivatives_at,
    euler_consistency,
    exact_coupling_tensor,
    fastpath_corollary,
    galois_class,
    jordan_verdict,
    normalize_multiplier,
    order2_verdict,
    parse_potential,
    spectrum_indices,
    tensor_scale,
    verify_darboux,
)
from .linalg import NotDiagonalizable
from .report import AnalysisReport, encode_number

INCOMPLETE_NOTE = "order-2 analysis incomplete (non-diagonalizable case)"


def random_complex_rotation(m: int, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """A random complex-orthogonal matrix, exp of a complex skew matrix."""
    from scipy.linalg import expm

    K = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    return expm(scale * (K - K.T))


def rotate_eigenbasis(spectrum: Spectrum, rng: np.random.Generator, keep_first: bool = True) -> Spectrum:
    """Mix eigenvectors inside each repeated eigenvalue by a random complex rotation.

    The basis stays complex-orthonormal and diagonalizing; X_1 is left alone
    when ``keep_first`` so the homothetic direction stays aligned with c.
    """
    lam = [complex(l) for l in spectrum.eigenvalues]
    P = spectrum.vectors.copy()
    n = len(lam)
    seen: set[int] = set()
    for a in range(n):
        if a in seen:
            continue
        group = [b for b in range(n) if abs(lam[b] - lam[a]) <= 1e-8 * max(1.0, abs(lam[a]))]
        seen.update(group)
        if keep_first and 0 in group:
            group = [b for b in group if b != 0]
        if len(group) < 2:
            continue
        R = random_complex_rotation(len(group), rng)
        P[:, group] = P[:, group] @ R
    return Spectrum(list(spectrum.eigenvalues), P, list(spectrum.p_indices), False)


def analyze_point(
    V: PotentialExpr | str,
    point: Sequence,
    tolerance: float = 1e-9,
    int_tolerance: float = 1e-6,
    branch: int = 0,
    spectrum_hook=None,
) -> AnalysisReport:
    """Run the order-1 / order-2 / Galois pipeline at one candidate point.

    ``spectrum_hook`` may replace the computed spectrum (used to test basis
    independence).  Input problems raise; verdicts go into the report.
    """
    if isinstance(V, str):
        V = parse_potential(V)
    timings: dict[str, float] = {}
    warnings: list[str] = []
    t0 = time.perf_counter()

    d0 = verify_darboux(V, point, tolerance)
    d = normalize_multiplier(V, d0, tolerance, branch)
    exact = d0.exact and d.exact
    darboux = {
        "point": [encode_number(x) for x in d0.c],
        "multiplier": encode_number(d0.multiplier),
        "normalized_point": [encode_number(x) for x in d.c],
        "residual": d.residual,
        "mode": "exact" if exact else "floating",
    }
    t1 = time.perf_counter()
    timings["darboux"] = t1 - t0

    der = derivatives_at(V, d.c)
    scale = tensor_scale(der.third)
    t2 = time.perf_counter()
    timings["derivatives"] = t2 - t1

    jordan = {"status": "diagonalizable", "blocks": [], "note": ""}
    spectrum: Spectrum | None = None
    try:
        spectrum = compute_spectrum(der.hessian, d.c, tolerance, int_tolerance, exact)
        if spectrum_hook is not None:
            spectrum = spectrum_hook(spectrum)
        eigenvalues = spectrum.eigenvalues
    except NotDiagonalizable:
        Hc = np.array([[complex(x) for x in row] for row in der.hessian])
        eigenvalues = list(np.linalg.eigvals(Hc))
    ps, bad = spectrum_indices(eigenvalues, int_tolerance)
    spec_doc = {
        "eigenvalues": [encode_number(x) for x in eigenvalues],
        "p_indices": ps,
        "exact": bool(spectrum is not None and spectrum.exact),
    }
    order1 = {"verdict": "fail" if bad else "pass", "failing_eigenvalues": [encode_number(x) for x in bad]}
    t3 = time.perf_counter()
    timings["spectrum"] = t3 - t2

    order2: dict = {"verdict": "skipped", "violations": [], "note": ""}
    galois = None
    euler = None
    fp = fastpath_corollary(ps)
    fastpath = {"applies": fp.applies, "B": fp.B, "reason": fp.reason}

    if bad:
        order2["note"] = "order-1 condition fails"
    elif spectrum is None:
        jv = jordan_verdict(der.hessian, tolerance, int_tolerance, exact)
        jordan = {
            "status": jv.status,
            "blocks": [{"eigenvalue": encode_number(b.eigenvalue), "size": b.size} for b in jv.blocks],
            "note": jv.reason,
        }
        if jv.status == "fail":
            order2["note"] = "Jordan structure incompatible with an abelian group"
        else:
            order2 = {"verdict": "incomplete", "violations": [], "note": INCOMPLETE_NOTE}
            if jv.status == "unresolvable":
                warnings.append(f"Jordan structure unresolvable: {jv.reason}")
        fastpath = {"applies": False, "B": [], "reason": "Hessian not diagonalizable"}
    else:
        T = coupling_tensor(der.third, spectrum.vectors)
        exact_T = exact_coupling_tensor(der.third, spectrum.exact_vectors) if spectrum.exact else None
        res = order2_verdict(spectrum, T, tolerance, exact_T, scale)
        order2 = {
            "verdict": "pass" if res.passed else "fail",
            "violations": [
                {"i": v.i, "j": v.j, "k": v.k, "p_triple": list(v.p_triple), "value": encode_number(v.value)}
                for v in res.violations
            ],
            "note": "",
        }
        ec = euler_consistency(spectrum, T, d.c, der.hessian, tolerance, scale)
        euler = {"passed": ec.passed, "max_defect": ec.max_defect, "messages": ec.messages}
        if not ec.passed:
            warnings.append("Euler identities fail at the point; derivatives are suspect")
        if fp.applies and not res.passed:
            warnings.append("fast-path corollary applies but the tensor check fails")
        if res.passed:
            cls, pv = galois_class(spectrum, T, tolerance, exact_T, scale)
            galois = {"class": cls, "pv_field": pv}
        if spectrum.orthonormality_error > 1e-8:
            warnings.append(f"eigenbasis orthonormality error {spectrum.orthonormality_error:.3g}")
    timings["order2"] = time.perf_counter() - t3

    return AnalysisReport(
        input=V.text,
        darboux=darboux,
        spectrum=spec_doc,
        order1=order1,
        order2=order2,
        galois=galois,
        jordan=jordan,
        fastpath=fastpath,
        euler=euler,
        warnings=warnings,
        timings=timings,
    )


def analyze(text: str, points: Sequence[Sequence], **kwargs) -> list[AnalysisReport]:
    V = parse_potential(text)
    return [analyze_point(V, p, **kwargs) for p in points]
