"""Band structure, singular-value sweeps, and estimate verification.

This layer drives the assembled fibers over the Brillouin zone 2 pi K,
sweeps the smallest singular value along a complex-quasimomentum line
(the mechanism certifying a trivial kernel), estimates the equivalence
constants between the fiber norm and the mode-distance weighted norms, and
evaluates the potential functionals

    f_W(N)  = inf_b (b + sqrt(N) ||W_b||),
    h_W(t)  = inf_eps (eps + C_eps(W)/t),
    htilde_W(b) = inf_eps min_{a >= 2 pi} (sqrt(6/pi) a ||W_b|| + eps + C_eps(W)/a),

where W_b keeps the samples with |W| > b and C_eps(W) is a relative-bound
constant computed as the top eigenvalue of a quadratic-form surrogate on the
truncated mode space.  Cesaro averages of the oscillatory integrals
I_nu = int_K e^{2 pi i nu (Psi - x2)} W and the coercivity margin checks close
the loop on the estimates used by the sweep argument.

Per-fiber work (each quasimomentum, each sweep point) is independent; a small
thread pool dispatches it when ``workers`` > 1 and results are collected by
index, so the output never depends on scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from ._kernels import power_moments
from .defaults import DEFAULTS, TOLERANCES
from .errors import (
    InadmissibleParameterError,
    NonHermitianError,
    ResolutionError,
    SingularWeightError,
    SupportViolationError,
)
from .fourier import (
    CoefficientSet,
    FourierGrid,
    ModeWeights,
    PeriodicScalarField,
    TWO_PI,
    convolve,
    index_set_T,
    project,
    sample_to_fourier,
    weighted_norm,
)
from .operators import (
    MatrixPotential,
    TruncatedOperator,
    assemble_dirac,
    assemble_dpm,
    multiplication_operator,
    block_operator,
)


def _pmap(fn, items, workers: int):
    """Ordered map, optionally over a thread pool (index-stable)."""
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def brillouin_grid(n1: int, n2: int) -> np.ndarray:
    """Uniform (n1 x n2) quasimomentum grid over [0, 2 pi)^2, row-major."""
    k1 = TWO_PI * np.arange(n1) / n1
    k2 = TWO_PI * np.arange(n2) / n2
    a, b = np.meshgrid(k1, k2, indexing="ij")
    return np.column_stack([a.ravel(), b.ravel()])


# ---------------------------------------------------------------------------
# Smallest singular values
# ---------------------------------------------------------------------------

def smallest_singular_value(op: TruncatedOperator, dense_limit: int | None = None,
                            tol: float | None = None, maxiter: int | None = None,
                            seed: int | None = None) -> float:
    """sigma_min of a truncated operator.

    Dense SVD while the scalar mode count stays below ``dense_limit``;
    otherwise LOBPCG on the normal operator A*A through the matrix-free
    application (both routes agree at the boundary).
    """
    dense_limit = DEFAULTS["dense_mode_limit"] if dense_limit is None else dense_limit
    if op.grid.n_modes <= dense_limit:
        return float(scipy.linalg.svdvals(op.matrix)[-1])
    tol = DEFAULTS["lobpcg_tol"] if tol is None else tol
    maxiter = DEFAULTS["lobpcg_maxiter"] if maxiter is None else maxiter
    seed = DEFAULTS["lobpcg_seed"] if seed is None else seed

    n = op.dim
    normal = scipy.sparse.linalg.LinearOperator(
        (n, n), matvec=lambda v: op.adjoint_apply(op.apply(v)), dtype=np.complex128)
    rng = np.random.default_rng(seed)
    x0 = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    vals, _ = scipy.sparse.linalg.lobpcg(normal, x0, largest=False, tol=tol,
                                         maxiter=maxiter)
    return float(np.sqrt(max(float(np.min(vals.real)), 0.0)))


# ---------------------------------------------------------------------------
# Band structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BandTable:
    """Per-quasimomentum sorted spectral values of the assembled fibers."""

    kpoints: np.ndarray           # (n_k, 2)
    values: np.ndarray            # (n_k, n_sel) sorted ascending per row
    mode: str                     # "eigen" or "singular"
    hermitian_defect: float       # worst |A - A^H| entry over the grid

    def rows(self):
        """(k1, k2, index, value) records in deterministic order."""
        for kp, vals in zip(self.kpoints, self.values):
            for idx, v in enumerate(vals):
                yield float(kp[0]), float(kp[1]), idx, float(v)


def band_structure(coeffs: CoefficientSet, V: MatrixPotential | None, kgrid,
                   grid: FourierGrid | None = None, n_bands: int | None = None,
                   mode: str = "auto", workers: int = 1) -> BandTable:
    """Fiber spectra over a real quasimomentum grid.

    ``mode="eigen"`` requires a Hermitian fiber (Hermitian-flagged potential
    and an assembled matrix equal to its conjugate transpose) and returns real
    eigenvalues; ``mode="singular"`` returns singular values; ``auto`` picks
    per assembly.  When ``n_bands`` is given, the values of smallest magnitude
    are kept per fiber and re-sorted ascending, a reproducible ordering.
    """
    if mode not in ("auto", "eigen", "singular"):
        raise ValueError(f"unknown mode {mode!r}")
    grid = coeffs.grid if grid is None else grid
    kgrid = np.atleast_2d(np.asarray(kgrid, dtype=float))
    if mode == "eigen" and V is not None and not V.is_hermitian():
        raise NonHermitianError("self-adjoint mode requested with a non-Hermitian potential")

    def one(k):
        a = assemble_dirac(coeffs, V, (k[0], k[1]), grid).matrix
        defect = float(np.max(np.abs(a - a.conj().T)))
        scale = max(1.0, float(np.max(np.abs(a))))
        hermitian = defect <= TOLERANCES["hermitian"] * scale
        if mode == "eigen" and not hermitian:
            raise NonHermitianError(
                f"fiber at k={tuple(k)} is not Hermitian (defect {defect:.3e})")
        use_eigen = hermitian if mode == "auto" else (mode == "eigen")
        if use_eigen:
            vals = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
        else:
            vals = np.sort(scipy.linalg.svdvals(a))
        if n_bands is not None:
            keep = np.argsort(np.abs(vals), kind="stable")[:n_bands]
            vals = np.sort(vals[keep])
        return vals, defect, use_eigen

    results = _pmap(one, list(kgrid), workers)
    values = np.array([r[0] for r in results])
    defect = max(r[1] for r in results)
    used_eigen = all(r[2] for r in results)
    return BandTable(kpoints=kgrid, values=values,
                     mode="eigen" if used_eigen else "singular",
                     hermitian_defect=defect)


# ---------------------------------------------------------------------------
# The sigma_min sweep along a complex line
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepConfig:
    """Complex-quasimomentum sweep line: k = (pi, k2), shift by mu_tilde * e."""

    direction: tuple[float, float] = (1.0, 0.0)
    k_prime: tuple[float, float] = (0.0, 0.0)
    kappa_prime: tuple[float, float] = (0.0, 0.0)
    mu_grid: tuple = (0.0,)
    k2_grid: tuple = (0.0,)
    k1: float = float(np.pi)

    def __post_init__(self):
        e = np.asarray(self.direction, dtype=float)
        if abs(np.linalg.norm(e) - 1.0) > 1e-9:
            raise InadmissibleParameterError(f"sweep direction {tuple(e)} is not a unit vector")


@dataclass(frozen=True)
class SweepReport:
    config: SweepConfig
    sigma: np.ndarray             # (n_mu, n_k2)
    min_per_mu: np.ndarray        # min over k2 for each mu_tilde
    flagged: np.ndarray           # bool, sigma_min below the certificate floor
    floor_log_intercept: float | None
    floor_log_slope: float | None

    def rows(self):
        for i, mu in enumerate(self.config.mu_grid):
            for j, k2 in enumerate(self.config.k2_grid):
                yield float(mu), float(k2), float(self.sigma[i, j])


def sweep_direction_from_gauge(canonical) -> tuple[float, float]:
    """Unit sweep direction e = kappa_tilde / |kappa_tilde| (has e_1 > 0)."""
    kt = np.asarray(canonical.kappa_tilde, dtype=float)
    e = kt / np.linalg.norm(kt)
    if e[0] <= 0:
        raise InadmissibleParameterError("canonical gauge produced a direction with e_1 <= 0")
    return (float(e[0]), float(e[1]))


def sigma_min_sweep(coeffs: CoefficientSet, V: MatrixPotential | None,
                    sweep: SweepConfig, grid: FourierGrid | None = None,
                    workers: int = 1, dense_limit: int | None = None) -> SweepReport:
    """sigma_min of D(k + k' + i(mu_tilde e + kappa')) + V over the sweep grid.

    Any value below the certificate floor is flagged (a potential eigenvalue
    certificate failure), never raised.  A log-linear floor is fitted to the
    per-mu_tilde minima when they are all positive.
    """
    grid = coeffs.grid if grid is None else grid
    e = np.asarray(sweep.direction, dtype=float)
    kp = np.asarray(sweep.k_prime, dtype=float)
    cp = np.asarray(sweep.kappa_prime, dtype=float)
    tasks = [(i, j, mu, k2)
             for i, mu in enumerate(sweep.mu_grid)
             for j, k2 in enumerate(sweep.k2_grid)]

    def one(task):
        _, _, mu, k2 = task
        k = np.array([sweep.k1, k2]) + kp
        kap = mu * e + cp
        from .operators import ComplexQuasimomentum
        z = ComplexQuasimomentum((k[0], k[1]), (kap[0], kap[1]))
        op = assemble_dirac(coeffs, V, z, grid)
        return smallest_singular_value(op, dense_limit=dense_limit)

    vals = _pmap(one, tasks, workers)
    sigma = np.zeros((len(sweep.mu_grid), len(sweep.k2_grid)))
    for (i, j, _, _), v in zip(tasks, vals):
        sigma[i, j] = v
    min_per_mu = sigma.min(axis=1)
    flagged = min_per_mu < TOLERANCES["sigma_min_flag"]

    intercept = slope = None
    if np.all(min_per_mu > 0) and len(sweep.mu_grid) >= 2:
        coeffs_fit = np.polyfit(np.asarray(sweep.mu_grid, dtype=float),
                                np.log(min_per_mu), 1)
        slope, intercept = float(coeffs_fit[0]), float(coeffs_fit[1])
    return SweepReport(config=sweep, sigma=sigma, min_per_mu=min_per_mu,
                       flagged=flagged, floor_log_intercept=intercept,
                       floor_log_slope=slope)


# ---------------------------------------------------------------------------
# Equivalence constants for the weighted norms
# ---------------------------------------------------------------------------

def estimate_c1_c2(coeffs: CoefficientSet, k, mu: float = 0.0,
                   grid: FourierGrid | None = None,
                   sign: str = "both") -> tuple[float, float]:
    """Extreme generalized singular values of dpm(k) + i mu H against Gpm_N.

    Returns (c1_emp, c2_emp) with 0 < c1_emp <= c2_emp such that

        c1_emp ||phi||_{*,pm}^2 <= ||(dpm(k) + i mu H) phi||^2 <= c2_emp ||phi||_{*,pm}^2

    holds for every retained phi (these are the tight empirical constants).
    """
    grid = coeffs.grid if grid is None else grid
    weights = ModeWeights(grid, (float(k[0]), float(k[1])), float(mu))
    signs = ("+", "-") if sign == "both" else (sign,)
    c1, c2 = np.inf, 0.0
    for s in signs:
        w = weights.g_plus if s == "+" else weights.g_minus
        if np.min(w) <= TOLERANCES["weight_zero"]:
            raise SingularWeightError(
                f"weight G{s}_N vanishes in the window at k={tuple(weights.k)}, mu={mu}")
        a = assemble_dpm(coeffs, (k[0], k[1]), mu, s, grid).matrix
        svals = scipy.linalg.svdvals(a / w[None, :])
        c1 = min(c1, float(svals[-1] ** 2))
        c2 = max(c2, float(svals[0] ** 2))
    return c1, c2


# ---------------------------------------------------------------------------
# Potential functionals
# ---------------------------------------------------------------------------

def _top_eigenvalue(a: np.ndarray) -> float:
    n = a.shape[0]
    if n <= 1500:
        return float(np.linalg.eigvalsh(a)[-1])
    # Lanczos with a relative tolerance; the spectrum top can be clustered, so
    # the full decomposition stays the default up to moderate sizes.
    v0 = np.ones(n) / np.sqrt(n)
    val = scipy.sparse.linalg.eigsh(a, k=1, which="LA", tol=1e-8, v0=v0,
                                    return_eigenvectors=False)
    return float(val[0])


def _relative_bound_constants(w_field: PeriodicScalarField, eps_grid: np.ndarray,
                              corners) -> np.ndarray:
    """C_eps(W) via the quadratic-form surrogate, maximised over quasimomentum corners.

    C_eps^2 = max over k' of lambda_max( C_W^H C_W - eps^2 diag(|k' + 2 pi N|^2) )
    on the truncated space; the square root of the positive part is returned.
    This upper-bounds the affine constant since sqrt(a^2 + b^2) <= a + b.
    """
    from .operators import _convolution_matrix

    grid = w_field.grid
    c = _convolution_matrix(w_field)
    ctc = c.conj().T @ c
    if np.max(np.abs(ctc)) == 0.0:
        return np.zeros(eps_grid.size)
    d2_list = [(k1 + TWO_PI * grid.n1) ** 2 + (k2 + TWO_PI * grid.n2) ** 2
               for k1, k2 in corners]
    out = np.empty(eps_grid.size)
    for i, eps in enumerate(eps_grid):
        best = max(_top_eigenvalue(ctc - (eps**2) * np.diag(d2)) for d2 in d2_list)
        out[i] = np.sqrt(max(best, 0.0))
    return out


@dataclass(frozen=True)
class PotentialProfile:
    """Tables of ||W_b||, f_W, C_eps, h_W, and htilde_W for one potential."""

    w: PeriodicScalarField
    b_grid: np.ndarray
    wb_norms: np.ndarray
    count_grid: np.ndarray
    f_values: np.ndarray
    eps_grid: np.ndarray
    c_eps: np.ndarray
    t_grid: np.ndarray
    h_values: np.ndarray
    htilde_values: np.ndarray
    corners: tuple
    _sorted_abs: np.ndarray = field(repr=False, default=None)

    @property
    def c1_w(self) -> float:
        """C_1(W), the relative-bound constant at eps = 1."""
        idx = int(np.argmin(np.abs(self.eps_grid - 1.0)))
        if abs(self.eps_grid[idx] - 1.0) > 1e-12:
            raise ValueError("eps_grid does not contain 1.0")
        return float(self.c_eps[idx])

    @property
    def c7(self) -> float:
        """1 + C_1(W)/pi, the bounded-multiplier constant on T(mu/2) supports."""
        return 1.0 + self.c1_w / np.pi

    def wb_norm(self, b: float) -> float:
        sq = self._sorted_abs**2
        idx = np.searchsorted(self._sorted_abs, b, side="right")
        return float(np.sqrt(sq[idx:].sum() / sq.size))

    def f_of(self, n: int) -> float:
        cands = np.concatenate([[0.0], self._sorted_abs])
        norms = np.array([self.wb_norm(b) for b in cands])
        return float(np.min(cands + np.sqrt(float(n)) * norms))

    def h_of(self, t: float) -> float:
        return float(np.min(self.eps_grid + self.c_eps / t))

    def htilde_of(self, b: float) -> float:
        return _htilde_value(self.wb_norm(b), self.eps_grid, self.c_eps)


def _htilde_value(wb: float, eps_grid: np.ndarray, c_eps: np.ndarray) -> float:
    """min over eps and a >= 2 pi of sqrt(6/pi) a wb + eps + C_eps/a (closed form in a)."""
    coef = np.sqrt(6.0 / np.pi)
    best = np.inf
    for eps, ce in zip(eps_grid, c_eps):
        if wb <= 0:
            inner = 0.0  # a -> infinity
        else:
            a_star = np.sqrt(ce / (coef * wb)) if ce > 0 else 0.0
            a_star = max(a_star, TWO_PI)
            inner = coef * a_star * wb + ce / a_star
        best = min(best, eps + inner)
    return float(best)


def potential_profile(w: PeriodicScalarField, *, eps_grid=None, b_grid=None,
                      count_grid=None, t_grid=None, corners=None) -> PotentialProfile:
    """Threshold norms, relative-bound constants, and the derived functionals.

    All tables inherit the monotonicity of their defining infima: b -> ||W_b||
    and b -> htilde_W(b) are nonincreasing, N -> f_W(N) nondecreasing, and
    t -> h_W(t) nonincreasing.
    """
    eps_grid = np.asarray(DEFAULTS["eps_grid"] if eps_grid is None else eps_grid, dtype=float)
    if eps_grid.size == 0:
        raise ValueError("eps_grid is empty")
    if not np.any(np.abs(eps_grid - 1.0) < 1e-12):
        eps_grid = np.sort(np.append(eps_grid, 1.0))

    samples = w.samples()
    absvals = np.sort(np.abs(samples).ravel())
    top = float(absvals[-1])

    b_grid = np.linspace(0.0, top * (1.0 + 1e-6), 16) if b_grid is None else np.asarray(b_grid, dtype=float)
    count_grid = np.array([1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 4096]) \
        if count_grid is None else np.asarray(count_grid, dtype=int)
    t_grid = np.geomspace(TWO_PI, 64 * np.pi, 10) if t_grid is None else np.asarray(t_grid, dtype=float)
    for name, g in (("b_grid", b_grid), ("count_grid", count_grid), ("t_grid", t_grid)):
        if g.size == 0:
            raise ValueError(f"{name} is empty")
    corners = DEFAULTS["quasimomentum_corners"] if corners is None else tuple(corners)

    # ||W_b|| over the requested levels (mean-square over samples = L^2(K) quadrature).
    sq = absvals**2
    suffix = np.concatenate([np.cumsum(sq[::-1])[::-1], [0.0]])
    n_s = sq.size

    def norm_at(b):
        idx = np.searchsorted(absvals, b, side="right")
        return np.sqrt(suffix[idx] / n_s)

    wb_norms = np.array([norm_at(b) for b in b_grid])

    # f_W(N) = inf_b (b + sqrt(N) ||W_b||): minimise over the sample levels,
    # where the step function b -> ||W_b|| actually changes.
    cand_b = np.concatenate([[0.0], absvals])
    cand_norm = np.array([norm_at(b) for b in cand_b])
    f_values = np.array([
        float(np.min(cand_b + np.sqrt(float(n)) * cand_norm)) for n in count_grid
    ])

    c_eps = _relative_bound_constants(w, eps_grid, corners)
    h_values = np.array([float(np.min(eps_grid + c_eps / t)) for t in t_grid])
    htilde_values = np.array([_htilde_value(nb, eps_grid, c_eps) for nb in wb_norms])

    return PotentialProfile(w=w, b_grid=b_grid, wb_norms=wb_norms,
                            count_grid=count_grid, f_values=f_values,
                            eps_grid=eps_grid, c_eps=c_eps, t_grid=t_grid,
                            h_values=h_values, htilde_values=htilde_values,
                            corners=corners, _sorted_abs=absvals)


def select_threshold_b(profile: PotentialProfile, c1: float,
                       denominator: float | None = None) -> float | None:
    """Smallest tabulated level b with htilde_W(b)^2 <= c1/denominator (or None)."""
    denominator = DEFAULTS["threshold_margin_denominator"] if denominator is None else denominator
    ok = profile.htilde_values**2 <= c1 / denominator
    if not np.any(ok):
        return None
    return float(profile.b_grid[int(np.argmax(ok))])


# ---------------------------------------------------------------------------
# Oscillatory averages
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WienerReport:
    """Cesaro averages A(N) of |I_nu|^2 and the threshold sets M_pm."""

    n_max: int
    theta: float
    abs_i_plus: np.ndarray     # |I_nu| for nu = 1..n_max (sign +)
    abs_i_minus: np.ndarray
    averages: np.ndarray       # A(N) for N = 1..n_max
    m_plus: tuple              # nu with |I^+_nu| >= theta
    m_minus: tuple
    resolution: tuple[int, int]
    required_resolution: tuple[int, int]

    @property
    def density_plus(self) -> float:
        return len(self.m_plus) / self.n_max

    @property
    def density_minus(self) -> float:
        return len(self.m_minus) / self.n_max

    def average_at(self, n: int) -> float:
        return float(self.averages[n - 1])


def _required_resolution(psi: PeriodicScalarField, n_max: int) -> tuple[int, int]:
    """Per-axis sample counts giving >= 8 samples per oscillation at nu = n_max."""
    per = DEFAULTS["phase_samples_per_oscillation"]
    fine = 4 * psi.grid.side
    m1 = float(np.max(np.abs(psi.derivative(1).samples((fine, fine)))))
    m2 = float(np.max(np.abs(psi.derivative(2).samples((fine, fine)) - 1.0)))
    floor = max(psi.grid.side, 16)
    s1 = max(int(np.ceil(per * n_max * m1)), floor)
    s2 = max(int(np.ceil(per * n_max * m2)), floor)
    return s1, s2


def wiener_average(w: PeriodicScalarField, psi: PeriodicScalarField, n_max: int,
                   theta: float, resolution=None) -> WienerReport:
    """Quadrature of I_nu = int_K e^{+- 2 pi i nu (Psi - x2)} W and its averages.

    The quadrature grid must resolve the phase 2 pi nu (Psi - x2) with at least
    8 samples per oscillation at nu = n_max along each axis; the automatic
    resolution guarantees this, an explicit one is checked and rejected with a
    :class:`ResolutionError` when too coarse.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if psi.grid != w.grid:
        # Fields may live on different grids; only their band content matters here.
        pass
    req = _required_resolution(psi, n_max)
    if resolution is None:
        s1, s2 = req
    else:
        s1, s2 = (int(resolution), int(resolution)) if np.isscalar(resolution) \
            else (int(resolution[0]), int(resolution[1]))
        if s1 < req[0] or s2 < req[1]:
            raise ResolutionError(
                f"resolution {(s1, s2)} below the phase-resolution requirement {req}")

    psis = psi.samples((s1, s2))
    ws = w.samples((s1, s2))
    x2 = (np.arange(s2) / s2)[None, :]
    e_plus = np.exp(2j * np.pi * (psis - x2))

    i_plus = power_moments(ws, e_plus, n_max)
    if w.is_real() and psi.is_real():
        i_minus = np.conj(i_plus)
    else:
        i_minus = power_moments(ws, np.conj(e_plus), n_max)

    abs_p = np.abs(i_plus)
    abs_m = np.abs(i_minus)
    averages = np.cumsum(abs_p**2) / np.arange(1, n_max + 1)
    m_plus = tuple(int(nu) for nu in np.nonzero(abs_p >= theta)[0] + 1)
    m_minus = tuple(int(nu) for nu in np.nonzero(abs_m >= theta)[0] + 1)
    return WienerReport(n_max=n_max, theta=theta, abs_i_plus=abs_p, abs_i_minus=abs_m,
                        averages=averages, m_plus=m_plus, m_minus=m_minus,
                        resolution=(s1, s2), required_resolution=req)


# ---------------------------------------------------------------------------
# Coercivity margins
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoercivityReport:
    margins: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    c1: float
    c7: float
    c8: float
    a: float
    mu: float
    k: tuple[float, float]
    warnings: tuple


def coercivity_operator(coeffs: CoefficientSet, vtilde0: PeriodicScalarField,
                        vtilde3: PeriodicScalarField, psi: PeriodicScalarField,
                        mu: float, k) -> TruncatedOperator:
    """Assemble D(k) + i mu H sigma_1 + e^{2 i mu sigma_3 Psi}(V0~ I + V3~ sigma_3)."""
    grid = coeffs.grid
    dp = assemble_dpm(coeffs, (k[0], k[1]), mu, "+", grid)
    dm = assemble_dpm(coeffs, (k[0], k[1]), mu, "-", grid)
    vplus = vtilde0 + vtilde3
    vminus = vtilde0 - vtilde3
    ps = psi.samples()
    b00 = multiplication_operator(
        sample_to_fourier(np.exp(2j * mu * ps) * vplus.samples(), grid))
    b11 = multiplication_operator(
        sample_to_fourier(np.exp(-2j * mu * ps) * vminus.samples(), grid))
    return block_operator([[b00, dm], [dp, b11]])


def verify_coercivity(coeffs: CoefficientSet, vtilde0: PeriodicScalarField,
                      vtilde3: PeriodicScalarField, psi: PeriodicScalarField,
                      mu: float, a: float, k, trials: int = 100, *,
                      seed: int = 0, c1: float | None = None,
                      c7: float | None = None, c8: float | None = None,
                      admissibility: list[WienerReport] | None = None) -> CoercivityReport:
    """Margins LHS - RHS of the coercivity inequality on random trial spinors.

    LHS is the squared fiber norm of the rotated-potential operator; RHS is
    (c1/6) sum_pm ||P^{T_pm(a)} phi_pm||_*^2 + c8 sum_pm ||P^{off} phi_pm||_{*,pm}^2.
    c1 defaults to the empirical equivalence constant at (k, mu); c8 to
    c1^2 / (6 (c1 + 4 c7^2)).  When threshold reports are supplied, a warning
    is recorded if mu/pi lands in an estimated excluded set.
    """
    grid = coeffs.grid
    if abs(k[0] - np.pi) > 1e-12:
        raise InadmissibleParameterError("the coercivity check runs on the line k1 = pi")
    if a < DEFAULTS["a_min"]:
        raise InadmissibleParameterError(f"need a >= 2 pi, got {a}")

    warnings = []
    nu = mu / np.pi
    if abs(nu - round(nu)) > 1e-9:
        warnings.append(f"mu/pi = {nu:.6f} is not an integer scaling")
    if admissibility:
        nu_int = int(round(nu))
        for rep in admissibility:
            if nu_int in rep.m_plus or nu_int in rep.m_minus:
                warnings.append(f"mu/pi = {nu_int} lies in an estimated excluded set")
                break

    if c1 is None:
        c1, _ = estimate_c1_c2(coeffs, k, mu, grid)
    if c7 is None:
        if vtilde0.l2_norm() == 0.0 and vtilde3.l2_norm() == 0.0:
            c7 = 1.0
        else:
            c7 = max(
                potential_profile(vtilde0 + vtilde3).c7,
                potential_profile(vtilde0 - vtilde3).c7,
            )
    if c8 is None:
        c8 = c1**2 / (6.0 * (c1 + 4.0 * c7**2))

    weights = ModeWeights(grid, (float(k[0]), float(k[1])), float(mu))
    t_plus = index_set_T(weights, a, "+")
    t_minus = index_set_T(weights, a, "-")
    op = coercivity_operator(coeffs, vtilde0, vtilde3, psi, mu, k)

    rng = np.random.default_rng(seed)
    n = grid.n_modes
    batch = (rng.standard_normal((2 * n, trials))
             + 1j * rng.standard_normal((2 * n, trials)))
    image = op.apply(batch)
    lhs = np.sum(np.abs(image) ** 2, axis=0)

    rhs = np.empty(trials)
    for t in range(trials):
        phi_p, phi_m = batch[:n, t], batch[n:, t]
        on = (weighted_norm(project(phi_p, t_plus.mask), weights, "star") ** 2
              + weighted_norm(project(phi_m, t_minus.mask), weights, "star") ** 2)
        off = (weighted_norm(project(phi_p, ~t_plus.mask), weights, "star_plus") ** 2
               + weighted_norm(project(phi_m, ~t_minus.mask), weights, "star_minus") ** 2)
        rhs[t] = (c1 / 6.0) * on + c8 * off
    return CoercivityReport(margins=lhs - rhs, lhs=lhs, rhs=rhs, c1=float(c1),
                            c7=float(c7), c8=float(c8), a=float(a), mu=float(mu),
                            k=(float(k[0]), float(k[1])), warnings=tuple(warnings))


# ---------------------------------------------------------------------------
# Cross-term bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossTermReport:
    ratios: np.ndarray
    max_ratio: float
    bound_constant: float
    tail_norm: float
    zero_bound_cases: int


def cross_term_check(w: PeriodicScalarField, weights: ModeWeights, a: float,
                     a_prime: float, n_trials: int = 100, *, seed: int = 0,
                     pairs=None) -> CrossTermReport:
    """Check |(phi, W psi)| <= sqrt(6 pi) a (sum_{2 pi |N| > a'-a} |W_N|^2)^{1/2} ||phi|| ||psi||.

    phi must vanish on T^pm(a'), psi outside T^pm(a) (same sign per pair); both
    signs are exercised for each random trial.  When the spectral tail of W is
    zero the inner product must vanish identically, which is verified against
    an absolute floor instead of a ratio.
    """
    mu = weights.mu
    if not (DEFAULTS["a_min"] <= a < a_prime <= mu / 2.0):
        raise InadmissibleParameterError(
            f"need 2 pi <= a < a' <= mu/2, got a={a}, a'={a_prime}, mu={mu}")
    grid = weights.grid
    radii = TWO_PI * np.hypot(grid.n1, grid.n2)
    tail = float(np.sqrt(np.sum(np.abs(w.coeffs[radii > a_prime - a]) ** 2)))
    bound_const = np.sqrt(6.0 * np.pi) * a * tail
    mult = multiplication_operator(w)

    sets = {s: (index_set_T(weights, a, s), index_set_T(weights, a_prime, s))
            for s in ("+", "-")}

    def one(phi, psi, sign):
        t_a, t_ap = sets[sign]
        if np.any(np.abs(phi[t_ap.mask]) > 0):
            raise SupportViolationError("phi has support inside T(a')")
        if np.any(np.abs(psi[~t_a.mask]) > 0):
            raise SupportViolationError("psi has support outside T(a)")
        ip = abs(complex(np.vdot(phi, mult.apply(psi))))
        scale = np.linalg.norm(phi) * np.linalg.norm(psi)
        return ip, scale

    ratios, zero_cases = [], 0
    if pairs is not None:
        iterable = pairs
    else:
        rng = np.random.default_rng(seed)
        iterable = []
        for _ in range(n_trials):
            for sign in ("+", "-"):
                t_a, t_ap = sets[sign]
                phi = project(rng.standard_normal(grid.n_modes)
                              + 1j * rng.standard_normal(grid.n_modes), ~t_ap.mask)
                psi = project(rng.standard_normal(grid.n_modes)
                              + 1j * rng.standard_normal(grid.n_modes), t_a.mask)
                iterable.append((phi, psi, sign))

    for phi, psi, sign in iterable:
        ip, scale = one(phi, psi, sign)
        if bound_const * scale > 1e-13:
            ratios.append(ip / (bound_const * scale))
        else:
            zero_cases += 1
            ratios.append(0.0 if ip <= 1e-10 * max(scale, 1.0) else np.inf)

    ratios = np.asarray(ratios)
    return CrossTermReport(ratios=ratios, max_ratio=float(np.max(ratios)),
                           bound_constant=float(bound_const), tail_norm=tail,
                           zero_bound_cases=zero_cases)


# ---------------------------------------------------------------------------
# Potential splitting and the scaling-exclusion recipe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitPotential:
    """Threshold split of the sigma_1/sigma_2 components and the rotated diagonal."""

    v1_tail: PeriodicScalarField       # samples of V1 where |V1| > b
    v2_tail: PeriodicScalarField
    v1_bounded: PeriodicScalarField    # the complementary (<= b) parts
    v2_bounded: PeriodicScalarField
    vtilde0: PeriodicScalarField       # V0 cosh 2Psi' + V3 sinh 2Psi'
    vtilde3: PeriodicScalarField       # V0 sinh 2Psi' + V3 cosh 2Psi'


def split_potential(V: MatrixPotential, b: float,
                    psi_prime: PeriodicScalarField) -> SplitPotential:
    """Threshold V1, V2 at level b and hyperbolically rotate the diagonal pair.

    The thresholded parts keep the samples with |V(x)| > b; all outputs are
    re-truncated to the window, so thresholding is exact only for fields whose
    split parts are themselves band-limited (constants, or b outside the range).
    """
    grid = V.grid
    ps = psi_prime.samples()
    ch, sh = np.cosh(2.0 * ps), np.sinh(2.0 * ps)
    v0s, v3s = V.v0.samples(), V.v3.samples()

    def threshold(fld):
        s = fld.samples()
        tail = np.where(np.abs(s) > b, s, 0.0)
        return (sample_to_fourier(tail, grid), sample_to_fourier(s - tail, grid))

    v1_tail, v1_bounded = threshold(V.v1)
    v2_tail, v2_bounded = threshold(V.v2)
    return SplitPotential(
        v1_tail=v1_tail, v2_tail=v2_tail,
        v1_bounded=v1_bounded, v2_bounded=v2_bounded,
        vtilde0=sample_to_fourier(v0s * ch + v3s * sh, grid),
        vtilde3=sample_to_fourier(v0s * sh + v3s * ch, grid),
    )


@dataclass(frozen=True)
class LadderReport:
    """Separated radii a_1 < a_2 < ... < a_{J+1} with band-tail control.

    Only the head of the ladder is materialised; ``constant_gap`` records the
    step used for the closed-form remainder (the tails of band-limited
    coefficient products vanish beyond a fixed gap, so all later rungs are
    equally spaced).
    """

    a1: float
    a_j: float
    j_count: int
    delta: float
    feasible: bool
    theta: float
    tau_star: float
    radii_head: tuple
    constant_gap: float | None


def admissibility_recipe(coeffs: CoefficientSet, c1: float, c2: float, c8: float,
                         a1: float, cap: int | None = None) -> LadderReport:
    """Radii ladder and threshold theta for the scaling-exclusion construction.

    J is the smallest integer with c2^2 <= J delta^2 where
    delta = min(c1/32, 3 c8/2); each step a_{j+1} - a_j is chosen so the
    spectral tails of the coefficient products G^2+F^2, (G +- iF)H, H^2 beyond
    the gap stay below delta / (4 sqrt(6 pi) a_j).  Once the gap clears the
    product bandwidth the tails are exactly zero and the remaining rungs use
    that constant gap, giving a closed form for arbitrarily long ladders.
    theta = c1 / (192 pi a_1^2 tau*) with tau* = 4 a_J^2 / pi.
    """
    cap = DEFAULTS["ladder_cap"] if cap is None else cap
    if a1 < DEFAULTS["a_min"]:
        raise InadmissibleParameterError(f"need a1 >= 2 pi, got {a1}")
    delta = min(c1 / 32.0, 1.5 * c8)
    j_count = int(np.ceil(c2**2 / delta**2))

    grid = coeffs.grid
    products = [
        convolve(coeffs.g, coeffs.g) + convolve(coeffs.f, coeffs.f),
        convolve(coeffs.c_plus(), coeffs.h),
        convolve(coeffs.c_minus(), coeffs.h),
        convolve(coeffs.h, coeffs.h),
    ]
    # Worst suffix tail over the four products, as a step function of the gap:
    # order = sorted distinct mode radii, tail_at[i] = tail just past order[i].
    radii_modes = TWO_PI * np.hypot(grid.n1, grid.n2)
    order = np.argsort(radii_modes, kind="stable")
    sorted_radii = radii_modes[order]
    tails = np.zeros(sorted_radii.size)
    for p in products:
        sq = np.abs(p.coeffs[order]) ** 2
        suffix = np.concatenate([np.cumsum(sq[::-1])[::-1], [0.0]])
        # tail strictly beyond radius sorted_radii[i]
        beyond = np.array([suffix[np.searchsorted(sorted_radii, r, side="right")]
                           for r in sorted_radii])
        tails = np.maximum(tails, np.sqrt(beyond))

    def smallest_gap(threshold: float) -> float | None:
        ok = np.nonzero(tails <= threshold)[0]
        if ok.size == 0:
            return None
        return float(sorted_radii[ok[0]]) + 1e-9

    # "Zero" tail up to transform rounding noise; exists because the products
    # are window-truncated (exact for inputs of degree <= M/2).
    noise_floor = 1e-13 * max(float(tails[0]), 1.0)
    zero_gap = smallest_gap(noise_floor)
    feasible = True
    radii = [float(a1)]
    head_cap = min(j_count, cap)
    for _ in range(head_cap):
        aj = radii[-1]
        gap = smallest_gap(delta / (4.0 * np.sqrt(6.0 * np.pi) * aj))
        if gap is None:
            feasible = False
            gap = zero_gap if zero_gap is not None else TWO_PI
        radii.append(aj + gap)

    if j_count > head_cap:
        # Remaining rungs use the zero-tail gap, which satisfies every
        # threshold; a_{j} = a_{head} + (j - head) * zero_gap.
        a_j = radii[-1] + (j_count - 1 - head_cap) * zero_gap
        constant_gap = zero_gap
    else:
        a_j = radii[j_count - 1] if j_count >= 1 else radii[0]
        constant_gap = None

    tau_star = 4.0 * a_j**2 / np.pi
    theta = c1 / (3.0 * 64.0 * np.pi * a1**2 * tau_star)
    return LadderReport(a1=float(a1), a_j=float(a_j), j_count=j_count,
                        delta=float(delta), feasible=feasible, theta=float(theta),
                        tau_star=float(tau_star),
                        radii_head=tuple(radii[: min(len(radii), 10)]),
                        constant_gap=constant_gap)
