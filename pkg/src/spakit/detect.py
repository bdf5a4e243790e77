"""Direct entanglement detection through the partial-transposition SPA.

The SPA output spectrum ``l'`` of a two-qubit state relates to the spectrum
``l`` of its partial transpose by ``l' = 2/9 + l/9``. The exact protocol
diagonalises the SPA output directly; the sampled protocol simulates the
32-outcome measurement, rebuilds the output state from outcome frequencies,
recovers its spectrum from the power sums ``Tr rho^N`` and attaches a
propagated statistical margin to the verdict.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .choi import apply
from .linalg import as_matrix, check_density_matrix, hermitian_eig, partial_transpose
from .povm import MeasurementModel, build_ps_model
from .sampling import Histogram, sample_outcomes
from .spa import choi_ps

SCHEMA = "spa-kit/1"

VERDICT_TOL = 1e-9
IMAG_TOL_EXACT = 1e-6
IMAG_TOL_SAMPLED = 1e-3
DK_TOL = 1e-12
DK_MAX_ITER = 200
# Roots closer than this, in groups of three or more, are treated as one multiple root.
CLUSTER_RADIUS = 1e-3
# Pairs this close are tested as a possible double root.
PAIR_RADIUS = 1e-5


class Verdict(str, Enum):
    ENTANGLED = "entangled"
    SEPARABLE_PPT = "separable_PPT"
    INCONCLUSIVE = "inconclusive"


def moments(rho, n_max: int) -> np.ndarray:
    """Power sums ``[Tr rho, Tr rho^2, ..., Tr rho^n_max]``."""
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    rho = as_matrix(rho)
    out = []
    power = rho
    for _ in range(n_max):
        out.append(float(np.trace(power).real))
        power = power @ rho
    return np.array(out)


def elementary_symmetric(power_sums) -> np.ndarray:
    """``e_0..e_n`` from ``p_1..p_n`` by Newton's identities."""
    p = np.asarray(power_sums, dtype=float)
    e = np.zeros(len(p) + 1)
    e[0] = 1.0
    for k in range(1, len(p) + 1):
        acc = 0.0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * p[i - 1]
        e[k] = acc / k
    return e


def characteristic_coefficients(power_sums) -> np.ndarray:
    """Monic coefficients, highest degree first, of ``prod (x - l_i)``."""
    e = elementary_symmetric(power_sums)
    return np.array([(-1) ** k * e[k] for k in range(len(e))])


class RootResult(NamedTuple):
    roots: np.ndarray
    iterations: int
    converged: bool


def durand_kerner(
    coeffs, tol: float = DK_TOL, max_iter: int = DK_MAX_ITER, initial=None
) -> RootResult:
    """All complex roots of a polynomial (coefficients highest degree first).

    Simultaneous Weierstrass updates ``z_k -= p(z_k) / prod_{j != k} (z_k - z_j)``
    until every relative step is below ``tol``. ``initial`` warm-starts the
    iteration, e.g. from the roots of a nearby polynomial.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    c = c / c[0]
    n = len(c) - 1
    if n == 0:
        return RootResult(np.zeros(0, dtype=np.complex128), 0, True)
    if initial is None:
        radius = 1.0 + float(np.max(np.abs(c[1:])))
        z = radius * (0.4 + 0.9j) ** np.arange(n)
    else:
        z = np.array(initial, dtype=np.complex128)
        # Identical starting points never separate.
        z = z + 1e-9 * (0.4 + 0.9j) ** np.arange(n)
    eye = np.eye(n, dtype=bool)
    for it in range(1, max_iter + 1):
        diff = z[:, None] - z[None, :]
        diff[eye] = 1.0
        denom = np.prod(diff, axis=1)
        denom[denom == 0] = tol
        step = np.polyval(c, z) / denom
        z = z - step
        if np.max(np.abs(step) / np.maximum(1.0, np.abs(z))) <= tol:
            return RootResult(z, it, True)
    return RootResult(z, max_iter, False)


def _newton(q, x: complex, max_steps: int = 50) -> complex:
    dq = np.polyder(q)
    for _ in range(max_steps):
        slope = np.polyval(dq, x)
        if slope == 0:
            break
        step = np.polyval(q, x) / slope
        x -= step
        if abs(step) <= 1e-15 * max(1.0, abs(x)):
            break
    return x


def _vanishes(coeffs: np.ndarray, x: complex) -> bool:
    # |p(x)| within the rounding error of evaluating p at x
    bound = 16 * np.finfo(float).eps * np.polyval(np.abs(coeffs), abs(x))
    return abs(np.polyval(coeffs, x)) <= bound


def collapse_clusters(roots, coeffs=None, radius: float = CLUSTER_RADIUS, min_size: int = 3) -> np.ndarray:
    """Replace tight groups of roots by one multiple root.

    A root of multiplicity ``m`` splits under rounding into ``m`` points at
    distance ~eps^(1/m) and Durand-Kerner converges to it only linearly.
    Groups of ``min_size`` or more within ``radius`` are replaced by their
    centroid, refined with Newton steps on the ``(m-1)``-th derivative when
    ``coeffs`` are given. Closer pairs (within ``PAIR_RADIUS``) are merged
    only if the polynomial vanishes at the refined point to rounding
    accuracy, so genuinely distinct close roots are kept apart.
    """
    z = np.array(roots, dtype=np.complex128)
    n = len(z)
    c = None if coeffs is None else np.asarray(coeffs, dtype=np.complex128)
    label = list(range(n))

    def find(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) < radius:
                label[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    for members in groups.values():
        m = len(members)
        x = z[members].mean()
        if m >= min_size:
            if c is not None:
                x = _newton(np.polyder(c, m - 1), x)
            z[members] = x
        elif m == 2 and c is not None and abs(z[members[0]] - z[members[1]]) < PAIR_RADIUS:
            x = _newton(np.polyder(c), x)
            if _vanishes(c, x):
                z[members] = x
    return z


class Recovery(NamedTuple):
    eigenvalues: list[float]
    max_imaginary: float
    is_real: bool
    converged: bool


def eigenvalues_from_moments(
    mu, dim: int, imag_tol: float = IMAG_TOL_EXACT, initial=None
) -> Recovery:
    """Spectrum of a ``dim``-dimensional Hermitian operator from ``mu_1..mu_dim``.

    ``is_real`` is False when some root keeps an imaginary part of at least
    ``imag_tol``, which signals moments that no Hermitian matrix produces.
    """
    mu = np.asarray(mu, dtype=float)
    if len(mu) < dim:
        raise ValueError(f"need {dim} moments, got {len(mu)}")
    coeffs = characteristic_coefficients(mu[:dim])
    result = durand_kerner(coeffs, initial=initial)
    z = collapse_clusters(result.roots, coeffs)
    max_imag = float(np.max(np.abs(z.imag))) if dim else 0.0
    vals = sorted((float(x) for x in z.real), reverse=True)
    return Recovery(vals, max_imag, max_imag < imag_tol, result.converged)


def pt_from_spa(spa_eigenvalues) -> np.ndarray:
    """Invert ``l' = 2/9 + l/9``."""
    return 9.0 * np.asarray(spa_eigenvalues, dtype=float) - 2.0


def invert_ps(rho_out) -> np.ndarray:
    """Input state of the two-qubit SPA from its output: ``PT(9 rho_out - 2)``."""
    rho_out = as_matrix(rho_out)
    if rho_out.shape != (4, 4):
        raise ValueError(f"expected a two-qubit operator, got shape {rho_out.shape}")
    return partial_transpose(9.0 * rho_out - 2.0 * np.eye(4), (2, 2), on=1)


@dataclass(frozen=True)
class ProtocolReport:
    verdict: Verdict
    spa_spectrum: list[float]
    pt_spectrum: list[float]
    moments: list[float]
    recovered_eigenvalues: list[float]
    min_pt_eigenvalue: float
    roots_real: bool
    sample_count: int = 0
    seed: int = 0
    margin: float | None = None
    outcome_histogram: dict[int, int] | None = None

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": "protocol-report",
            "mode": "sampled" if self.sample_count else "exact",
            "verdict": self.verdict.value,
            "min_pt_eigenvalue": self.min_pt_eigenvalue,
            "margin": self.margin,
            "spa_spectrum": self.spa_spectrum,
            "pt_spectrum": self.pt_spectrum,
            "moments": self.moments,
            "recovered_eigenvalues": self.recovered_eigenvalues,
            "roots_real": self.roots_real,
            "sample_count": self.sample_count,
            "seed": self.seed,
            "outcome_histogram": (
                None
                if self.outcome_histogram is None
                else {str(k): v for k, v in sorted(self.outcome_histogram.items())}
            ),
        }


def verdict_exact(rho_ab, tol: float = VERDICT_TOL) -> ProtocolReport:
    rho_ab = check_density_matrix(rho_ab)
    if rho_ab.shape != (4, 4):
        raise ValueError(f"expected a two-qubit state, got shape {rho_ab.shape}")
    out = apply(choi_ps(), rho_ab)
    spa = hermitian_eig(out).eigenvalues
    pt = pt_from_spa(spa)
    mu = moments(out, 4)
    rec = eigenvalues_from_moments(mu, 4, IMAG_TOL_EXACT)
    lo = float(pt[-1])
    verdict = Verdict.ENTANGLED if lo < -tol else Verdict.SEPARABLE_PPT
    return ProtocolReport(
        verdict=verdict,
        spa_spectrum=[float(x) for x in spa],
        pt_spectrum=[float(x) for x in pt],
        moments=[float(x) for x in mu],
        recovered_eigenvalues=rec.eigenvalues,
        min_pt_eigenvalue=lo,
        roots_real=rec.is_real,
    )


def _empirical_output(model: MeasurementModel, weights) -> np.ndarray:
    out = np.zeros((model.dim_out, model.dim_out), dtype=np.complex128)
    for w, r in zip(weights, model.outputs):
        out += w * r
    return out


def _pipeline_min(model: MeasurementModel, weights, initial=None) -> tuple[float, Recovery]:
    mu = moments(_empirical_output(model, weights), model.dim_out)
    rec = eigenvalues_from_moments(mu, model.dim_out, IMAG_TOL_SAMPLED, initial=initial)
    return float(pt_from_spa(rec.eigenvalues)[-1]), rec


def pipeline_margin(
    model: MeasurementModel, freqs, n: int, k_sigma: float = 3.0, step: float = 1e-6
) -> float:
    """``k_sigma`` standard deviations of the recovered minimum PT eigenvalue.

    The gradient with respect to each outcome frequency is taken by central
    differences through the full moment/root pipeline; the multinomial
    covariance ``(diag f - f f^T)/n`` is propagated linearly.
    """
    f = np.asarray(freqs, dtype=float)
    start = _pipeline_min(model, f)[1].eigenvalues
    grad = np.zeros(len(f))
    for j in range(len(f)):
        up, down = f.copy(), f.copy()
        up[j] += step
        down[j] -= step
        hi = _pipeline_min(model, up, start)[0]
        lo = _pipeline_min(model, down, start)[0]
        grad[j] = (hi - lo) / (2 * step)
    cov = (np.diag(f) - np.outer(f, f)) / n
    var = float(grad @ cov @ grad)
    return k_sigma * float(np.sqrt(max(var, 0.0)))


def verdict_from_interval(estimate: float, margin: float) -> Verdict:
    if estimate + margin < 0:
        return Verdict.ENTANGLED
    if estimate - margin > 0:
        return Verdict.SEPARABLE_PPT
    return Verdict.INCONCLUSIVE


def verdict_sampled(
    rho_ab,
    model: MeasurementModel | None = None,
    n_samples: int = 100_000,
    seed: int = 0,
    k_sigma: float = 3.0,
    workers: int = 1,
) -> ProtocolReport:
    """Protocol run on ``n_samples`` simulated measurement outcomes."""
    if n_samples < 1:
        raise ValueError(f"n_samples must be positive, got {n_samples}")
    model = build_ps_model() if model is None else model
    rho_ab = check_density_matrix(rho_ab)
    hist: Histogram = sample_outcomes(model, rho_ab, n_samples, seed, workers=workers)
    f = hist.counts / n_samples
    out = _empirical_output(model, f)
    spa = hermitian_eig(out).eigenvalues
    lo, rec = _pipeline_min(model, f)
    margin = pipeline_margin(model, f, n_samples, k_sigma)
    verdict = verdict_from_interval(lo, margin) if rec.is_real else Verdict.INCONCLUSIVE
    return ProtocolReport(
        verdict=verdict,
        spa_spectrum=[float(x) for x in spa],
        pt_spectrum=[float(x) for x in pt_from_spa(rec.eigenvalues)],
        moments=[float(x) for x in moments(out, 4)],
        recovered_eigenvalues=rec.eigenvalues,
        min_pt_eigenvalue=lo,
        roots_real=rec.is_real,
        sample_count=n_samples,
        seed=seed,
        margin=margin,
        outcome_histogram=hist.as_dict(),
    )
