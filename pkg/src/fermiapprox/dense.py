"""Exact dense oracle: Jordan-Wigner realization, spectra, and verification.

Majorana generators are realized on n qubits as

    c_{2j}   -> Z^(j) X I^(n-j-1)      (0-based index 2j,   mode j)
    c_{2j+1} -> Z^(j) Y I^(n-j-1)      (0-based index 2j+1, mode j)

i.e. the 1-based pair (c_1, c_2) of mode 1 maps to (X, Y) with a Z string in
front.  Eigenvalues come from an in-repo Hermitian eigensolver (complex
Householder tridiagonalization followed by implicit-shift QL), cross-checked
against shifted power iteration inside lambda_max, so the oracle does not
lean on an external diagonalization routine.

The default mode cap of 12 (dimension 4096) keeps dense matrices under a few
hundred MB; callers hit ModeCapError beyond it rather than thrashing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .conflict_graph import (
    REGIME_GENERAL,
    REGIME_MIXED24,
    REGIME_STRICTQ,
    auto_regime,
)
from .hamiltonian import Hamiltonian
from .algebra import MajoranaMonomial
from .states import GaussianSolution, StabilizerSolution

__all__ = [
    "MODE_CAP_DEFAULT",
    "ModeCapError",
    "GuaranteeViolation",
    "GuaranteeReport",
    "jordan_wigner",
    "monomial_matrix",
    "realize_hamiltonian",
    "realize_stabilizer",
    "realize_gaussian",
    "hermitian_eigenvalues",
    "power_iteration_lambda_max",
    "lambda_max",
    "regime_denominator",
    "verify",
]

MODE_CAP_DEFAULT = 12

_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


class ModeCapError(ValueError):
    """Dense realization requested beyond the configured mode cap."""


class GuaranteeViolation(RuntimeError):
    """A certified inequality failed dense verification."""

    def __init__(self, report: "GuaranteeReport") -> None:
        super().__init__("; ".join(report.violations))
        self.report = report


def _check_cap(modes: int, cap: int) -> None:
    if modes < 1:
        raise ValueError("modes must be >= 1, got %d" % modes)
    if modes > cap:
        raise ModeCapError(
            "dense realization of %d modes exceeds the cap of %d (dim 2^%d)"
            % (modes, cap, modes)
        )


def jordan_wigner(index: int, modes: int, cap: int = MODE_CAP_DEFAULT) -> np.ndarray:
    """Dense 2^n x 2^n matrix of Majorana generator c_index (0-based)."""
    _check_cap(modes, cap)
    if not 0 <= index < 2 * modes:
        raise ValueError("index %d out of range for %d modes" % (index, modes))
    mode, parity = divmod(index, 2)
    out = np.array([[1.0 + 0.0j]])
    for j in range(modes):
        if j < mode:
            factor = _Z
        elif j == mode:
            factor = _X if parity == 0 else _Y
        else:
            factor = _I2
        out = np.kron(out, factor)
    return out


def monomial_matrix(
    monomial: MajoranaMonomial, modes: int, cap: int = MODE_CAP_DEFAULT
) -> np.ndarray:
    """Dense matrix of a normal-form monomial, phase included."""
    _check_cap(modes, cap)
    dim = 2 ** modes
    out = np.eye(dim, dtype=complex)
    for idx in monomial.indices:
        out = out @ jordan_wigner(idx, modes, cap)
    return monomial.phase.to_complex() * out


def realize_hamiltonian(h: Hamiltonian, cap: int = MODE_CAP_DEFAULT) -> np.ndarray:
    """Dense Hermitian matrix of the instance; exact sum of term matrices."""
    _check_cap(h.modes, cap)
    dim = 2 ** h.modes
    out = np.zeros((dim, dim), dtype=complex)
    for term in h.terms:
        out += term.coefficient * monomial_matrix(term.monomial(), h.modes, cap)
    herm_defect = np.abs(out - out.conj().T).max() if h.terms else 0.0
    if herm_defect > 1e-12:
        raise AssertionError(
            "realized Hamiltonian is not Hermitian (defect %.3e)" % herm_defect
        )
    return out


def realize_stabilizer(
    s: StabilizerSolution, h: Hamiltonian, cap: int = MODE_CAP_DEFAULT
) -> np.ndarray:
    """Dense density matrix 2^-n prod (I + sign c^G)."""
    _check_cap(s.modes, cap)
    dim = 2 ** s.modes
    rho = np.eye(dim, dtype=complex)
    for tid, sign in zip(s.term_ids, s.signs):
        gen = monomial_matrix(h.terms[tid].monomial(), s.modes, cap)
        rho = rho @ (np.eye(dim, dtype=complex) + sign * gen)
    return rho / dim


def realize_gaussian(g: GaussianSolution, cap: int = MODE_CAP_DEFAULT) -> np.ndarray:
    """Dense density matrix 2^-n prod (I + z_gh i c_g c_h) over all plan pairs."""
    plan = g.plan
    _check_cap(plan.modes, cap)
    dim = 2 ** plan.modes
    rho = np.eye(dim, dtype=complex)
    for gg, hh in plan.all_pairs():
        factor = 1.0j * (
            jordan_wigner(gg, plan.modes, cap) @ jordan_wigner(hh, plan.modes, cap)
        )
        rho = rho @ (np.eye(dim, dtype=complex) + g.z[(gg, hh)] * factor)
    return rho / dim


# ---------------------------------------------------------------------------
# in-repo Hermitian eigensolver


def _check_hermitian(matrix: np.ndarray) -> np.ndarray:
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix, got shape %r" % (a.shape,))
    scale = max(1.0, float(np.abs(a).max()) if a.size else 0.0)
    if float(np.abs(a - a.conj().T).max() if a.size else 0.0) > 1e-12 * scale:
        raise ValueError("matrix is not Hermitian")
    return a


def _tridiagonalize(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Householder reduction of a Hermitian matrix to real tridiagonal form.

    Returns (d, e): the diagonal and the off-diagonal magnitudes.  The
    complex off-diagonals are rotated real-positive by a diagonal unitary,
    which leaves the spectrum unchanged.
    """
    a = np.array(a, dtype=complex)
    nn = a.shape[0]
    d = np.empty(nn)
    e = np.zeros(max(nn - 1, 0))
    for k in range(nn - 2):
        x = a[k + 1 :, k]
        norm_x = float(np.linalg.norm(x))
        if norm_x == 0.0:
            e[k] = 0.0
            continue
        pivot = x[0]
        phase = pivot / abs(pivot) if pivot != 0 else 1.0 + 0.0j
        alpha = -phase * norm_x
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        block = a[k + 1 :, k + 1 :]
        block -= 2.0 * np.outer(v, np.conj(v) @ block)
        block -= 2.0 * np.outer(block @ v, np.conj(v))
        a[k + 1, k] = alpha
        if k + 2 < nn:
            a[k + 2 :, k] = 0.0
        e[k] = abs(alpha)
    if nn >= 2:
        e[nn - 2] = abs(a[nn - 1, nn - 2])
    d[:] = a.diagonal().real
    return d, e


def _ql_implicit(d: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Implicit-shift QL on a real symmetric tridiagonal; eigenvalues only."""
    d = np.array(d, dtype=float)
    n = d.size
    if n == 0:
        return d
    ee = np.zeros(n)
    ee[: n - 1] = e
    eps = np.finfo(float).eps
    for l in range(n):
        iterations = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(ee[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            iterations += 1
            if iterations > 64:
                raise ArithmeticError("QL sweep failed to converge")
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + ee[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * ee[i]
                b = c * ee[i]
                r = math.hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    ee[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if not underflow:
                d[l] -= p
                ee[l] = g
                ee[m] = 0.0
    return d


def hermitian_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, ascending (Householder + QL)."""
    a = _check_hermitian(matrix)
    if a.shape[0] == 0:
        return np.empty(0)
    if a.shape[0] == 1:
        return np.array([a[0, 0].real])
    d, e = _tridiagonalize(a)
    return np.sort(_ql_implicit(d, e))


def power_iteration_lambda_max(
    matrix: np.ndarray,
    tol: float = 1e-11,
    max_iter: int = 100000,
    seed: int = 20240229,
) -> float:
    """Largest eigenvalue via shifted power iteration (independent route).

    The spectrum is shifted positive by one plus the max absolute row sum, so
    the dominant eigenvalue of the shifted operator is lambda_max + shift;
    the estimate is the Rayleigh quotient on the original matrix.
    """
    a = _check_hermitian(matrix)
    n = a.shape[0]
    if n == 0:
        raise ValueError("empty matrix has no eigenvalues")
    shift = float(np.abs(a).sum(axis=1).max()) + 1.0
    b = a + shift * np.eye(n)
    # squaring accelerates convergence; each apply is then b^8
    if n <= 512:
        for _ in range(3):
            b = b @ b
            b /= np.linalg.norm(b, ord=np.inf)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1.0j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    previous = None
    stable = 0
    for _ in range(max_iter):
        w = b @ v
        norm_w = float(np.linalg.norm(w))
        if norm_w == 0.0:
            v = rng.standard_normal(n) + 1.0j * rng.standard_normal(n)
            v /= np.linalg.norm(v)
            continue
        v = w / norm_w
        estimate = float(np.real(np.conj(v) @ (a @ v)))
        if previous is not None and abs(estimate - previous) <= tol * max(
            1.0, abs(estimate)
        ):
            stable += 1
            if stable >= 3:
                return estimate
        else:
            stable = 0
        previous = estimate
    return float(previous if previous is not None else 0.0)


def lambda_max(op: np.ndarray, cross_check: bool = True) -> float:
    """Largest eigenvalue of a Hermitian matrix.

    Computed with the in-repo eigensolver; when cross_check is set (the
    default), shifted power iteration must agree within 1e-8 or an
    ArithmeticError flags the discrepancy.
    """
    values = hermitian_eigenvalues(op)
    if values.size == 0:
        raise ValueError("empty matrix has no eigenvalues")
    top = float(values[-1])
    if cross_check:
        alt = power_iteration_lambda_max(op)
        if abs(alt - top) > 1e-8 * max(1.0, abs(top)):
            raise ArithmeticError(
                "eigensolver (%r) and power iteration (%r) disagree" % (top, alt)
            )
    return top


# ---------------------------------------------------------------------------
# guarantee verification


def regime_denominator(regime: str, k: int, q: int) -> int:
    """The approximation denominator Q for a regime: certified energy >= m/Q."""
    if regime == REGIME_MIXED24:
        return 4 * k + 1
    if regime == REGIME_STRICTQ:
        return q * k + 1
    if regime == REGIME_GENERAL:
        qk = q * k
        return qk + k * (qk - 1) + 1 if k > 0 else 1
    raise ValueError("unknown regime %r" % regime)


@dataclass(frozen=True)
class GuaranteeReport:
    """All checked quantities of one verification run.

    Key-value schema (stable keys, floats via repr; oracle keys absent when
    the instance exceeds the mode cap)::

        report-format 1
        modes, terms, sparsity-k, locality-q, regime, weight-m, denominator,
        bound, certified-energy, gaussian-energy, ratio-vs-bound, oracle,
        lambda-max, dense-stabilizer-energy, dense-gaussian-energy,
        ratio-vs-opt, status
    """

    modes: int
    num_terms: int
    sparsity: int
    locality: int
    regime: str
    weight: float
    denominator: int
    certified_energy: float
    gaussian_energy: float
    ratio_vs_bound: float
    oracle: str
    lambda_max: Optional[float]
    dense_stabilizer_energy: Optional[float]
    dense_gaussian_energy: Optional[float]
    ratio_vs_opt: Optional[float]
    violations: Tuple[str, ...]

    @property
    def bound(self) -> float:
        return self.weight / self.denominator

    @property
    def status(self) -> str:
        return "ok" if not self.violations else "violation"

    def to_kv(self) -> str:
        pairs: List[Tuple[str, str]] = [
            ("report-format", "1"),
            ("modes", str(self.modes)),
            ("terms", str(self.num_terms)),
            ("sparsity-k", str(self.sparsity)),
            ("locality-q", str(self.locality)),
            ("regime", self.regime),
            ("weight-m", repr(self.weight)),
            ("denominator", str(self.denominator)),
            ("bound", repr(self.bound)),
            ("certified-energy", repr(self.certified_energy)),
            ("gaussian-energy", repr(self.gaussian_energy)),
            ("ratio-vs-bound", repr(self.ratio_vs_bound)),
            ("oracle", self.oracle),
        ]
        if self.lambda_max is not None:
            pairs.append(("lambda-max", repr(self.lambda_max)))
        if self.dense_stabilizer_energy is not None:
            pairs.append(("dense-stabilizer-energy", repr(self.dense_stabilizer_energy)))
        if self.dense_gaussian_energy is not None:
            pairs.append(("dense-gaussian-energy", repr(self.dense_gaussian_energy)))
        if self.ratio_vs_opt is not None:
            pairs.append(("ratio-vs-opt", repr(self.ratio_vs_opt)))
        pairs.append(("status", self.status))
        lines = ["%s %s" % (key, value) for key, value in pairs]
        for violation in self.violations:
            lines.append("violation %s" % violation)
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [
            "instance: %d modes, %d terms, k=%d, q=%d, class %s"
            % (self.modes, self.num_terms, self.sparsity, self.locality, self.regime),
            "weight m            = %r" % self.weight,
            "denominator Q       = %d" % self.denominator,
            "bound m/Q           = %r" % self.bound,
            "certified energy    = %r" % self.certified_energy,
            "gaussian energy     = %r" % self.gaussian_energy,
            "ratio vs bound      = %r" % self.ratio_vs_bound,
        ]
        if self.oracle == "dense":
            lines.append("lambda max          = %r" % self.lambda_max)
            lines.append("dense Tr(H rho_s)   = %r" % self.dense_stabilizer_energy)
            lines.append("dense Tr(H rho_g)   = %r" % self.dense_gaussian_energy)
            lines.append("ratio vs optimum    = %r" % self.ratio_vs_opt)
        else:
            lines.append("oracle              = skipped (above mode cap)")
        lines.append("status              = %s" % self.status)
        for violation in self.violations:
            lines.append("VIOLATION: %s" % violation)
        return "\n".join(lines) + "\n"


def verify(
    h: Hamiltonian,
    stabilizer: StabilizerSolution,
    gaussian: GaussianSolution,
    regime: str = "auto",
    oracle_cap: int = MODE_CAP_DEFAULT,
) -> GuaranteeReport:
    """Check the full approximation guarantee chain; raise on any violation.

    Closed-form checks: certified >= m/Q - 1e-9 and gaussian >= certified -
    1e-10.  When the instance fits under the oracle cap, the dense route
    additionally recomputes both energies (agreement within 1e-10) and
    lambda_max, which must dominate both energies within 1e-9.
    """
    if regime == "auto":
        regime = auto_regime(h)
    k, q, m = h.sparsity, h.max_locality, h.total_weight
    denominator = regime_denominator(regime, k, q)
    certified = stabilizer.certified_energy
    violations: List[str] = []
    bound = m / denominator
    if certified < bound - 1e-9:
        violations.append(
            "certified energy %r below m/Q = %r" % (certified, bound)
        )
    if gaussian.energy < certified - 1e-10:
        violations.append(
            "gaussian energy %r below certified energy %r" % (gaussian.energy, certified)
        )
    lam: Optional[float] = None
    dense_stab: Optional[float] = None
    dense_gauss: Optional[float] = None
    ratio_opt: Optional[float] = None
    if h.modes <= oracle_cap:
        oracle = "dense"
        hd = realize_hamiltonian(h, oracle_cap)
        lam = lambda_max(hd)
        rho_s = realize_stabilizer(stabilizer, h, oracle_cap)
        dense_stab = float(np.real(np.trace(hd @ rho_s)))
        rho_g = realize_gaussian(gaussian, oracle_cap)
        dense_gauss = float(np.real(np.trace(hd @ rho_g)))
        if abs(dense_stab - certified) > 1e-10:
            violations.append(
                "dense stabilizer energy %r != certified %r" % (dense_stab, certified)
            )
        if abs(dense_gauss - gaussian.energy) > 1e-10:
            violations.append(
                "dense gaussian energy %r != closed form %r"
                % (dense_gauss, gaussian.energy)
            )
        if lam < certified - 1e-9:
            violations.append(
                "lambda max %r below certified energy %r" % (lam, certified)
            )
        if lam < gaussian.energy - 1e-9:
            violations.append(
                "lambda max %r below gaussian energy %r" % (lam, gaussian.energy)
            )
        if lam != 0.0:
            ratio_opt = certified / lam
    else:
        oracle = "skipped"
    report = GuaranteeReport(
        modes=h.modes,
        num_terms=len(h.terms),
        sparsity=k,
        locality=q,
        regime=regime,
        weight=m,
        denominator=denominator,
        certified_energy=certified,
        gaussian_energy=gaussian.energy,
        ratio_vs_bound=(certified / bound) if bound > 0 else 1.0,
        oracle=oracle,
        lambda_max=lam,
        dense_stabilizer_energy=dense_stab,
        dense_gaussian_energy=dense_gauss,
        ratio_vs_opt=ratio_opt,
        violations=tuple(violations),
    )
    if violations:
        raise GuaranteeViolation(report)
    return report
