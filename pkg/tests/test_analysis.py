"""Band structure, sweeps, equivalence constants, potential functionals, averages."""

import numpy as np
import pytest
import scipy.linalg

import dirac2d as d
from dirac2d._kernels import power_moments


def constant_set(m=4):
    grid = d.FourierGrid(m, 2 * (2 * m + 1))
    return grid, d.CoefficientSet.constant(grid)


def random_set(m=4, seed=0, **kw):
    grid = d.FourierGrid(m, 2 * (2 * m + 1))
    rng = np.random.default_rng(seed)
    return grid, d.random_gamma_instance(grid, rng, **kw), rng


def free_oracle(grid, k):
    mags = np.hypot(k[0] + 2 * np.pi * grid.n1, k[1] + 2 * np.pi * grid.n2)
    return np.sort(np.concatenate([mags, -mags]))


class TestBandStructure:
    def test_free_oracle(self):
        grid, cs = constant_set()
        kgrid = d.brillouin_grid(4, 4)
        table = d.band_structure(cs, None, kgrid)
        assert table.mode == "eigen"
        for kp, vals in zip(table.kpoints, table.values):
            assert np.max(np.abs(vals - free_oracle(grid, kp))) < 1e-10

    def test_mass_term_gap(self):
        # V = m sigma_3: eigenvalues +-sqrt(|k + 2 pi N|^2 + m^2).
        grid, cs = constant_set(3)
        m = 0.4
        V = d.MatrixPotential.diagonal(grid, v3=m)
        kgrid = np.array([[0.0, 0.0], [0.5, 0.2]])
        table = d.band_structure(cs, V, kgrid)
        for kp, vals in zip(table.kpoints, table.values):
            mags = np.hypot(kp[0] + 2 * np.pi * grid.n1, kp[1] + 2 * np.pi * grid.n2)
            branch = np.sqrt(mags**2 + m**2)
            oracle = np.sort(np.concatenate([branch, -branch]))
            assert np.max(np.abs(vals - oracle)) < 1e-10
        # relativistic gap 2|m| at the band edge
        edge = table.values[0]
        positive = edge[edge > 0]
        negative = edge[edge < 0]
        assert positive.min() - negative.max() == pytest.approx(2 * m, abs=1e-10)

    def test_k0_zero_eigenvalue_multiplicity_two(self):
        _, cs = constant_set(3)
        table = d.band_structure(cs, None, [[0.0, 0.0]], n_bands=4)
        zeros = np.sum(np.abs(table.values[0]) < 1e-12)
        assert zeros == 2

    def test_band_selection_reproducible(self):
        grid, cs = constant_set(3)
        t1 = d.band_structure(cs, None, [[0.3, 0.4]], n_bands=6)
        t2 = d.band_structure(cs, None, [[0.3, 0.4]], n_bands=6)
        assert np.array_equal(t1.values, t2.values)
        assert np.all(np.diff(t1.values[0]) >= 0)

    def test_weyl_continuity(self):
        # Full sorted Hermitian spectra: adjacent-k jumps are bounded by the
        # operator-norm difference of the fibers.
        grid, cs = constant_set(3)
        rng = np.random.default_rng(1)
        V = d.MatrixPotential(
            v0=d.random_trig_field(grid, rng, 1, 0.3),
            v1=d.random_trig_field(grid, rng, 1, 0.3),
            v2=d.random_trig_field(grid, rng, 1, 0.3),
            v3=d.random_trig_field(grid, rng, 1, 0.3),
        )
        ks = np.column_stack([np.linspace(0.1, 0.9, 5), np.full(5, 0.2)])
        table = d.band_structure(cs, V, ks)
        for i in range(len(ks) - 1):
            a = d.assemble_dirac(cs, V, ks[i]).matrix
            b = d.assemble_dirac(cs, V, ks[i + 1]).matrix
            gap = np.max(np.abs(table.values[i + 1] - table.values[i]))
            assert gap <= np.linalg.norm(b - a, ord=2) + 1e-10

    def test_eigen_mode_rejects_nonhermitian_fiber(self):
        _, cs, _ = random_set(seed=2)
        with pytest.raises(d.NonHermitianError):
            d.band_structure(cs, None, [[0.3, 0.3]], mode="eigen")

    def test_eigen_mode_rejects_nonhermitian_potential(self):
        grid, cs = constant_set(2)
        z = d.PeriodicScalarField.constant(grid, 0.0)
        V = d.MatrixPotential(v0=d.PeriodicScalarField.constant(grid, 1j), v1=z, v2=z, v3=z)
        with pytest.raises(d.NonHermitianError):
            d.band_structure(cs, V, [[0.3, 0.3]], mode="eigen")

    def test_auto_falls_back_to_singular(self):
        _, cs, _ = random_set(seed=3)
        table = d.band_structure(cs, None, [[0.3, 0.3]], mode="auto")
        assert table.mode == "singular"
        assert np.all(table.values >= 0)


class TestSweep:
    def test_constant_floor_pi(self):
        _, cs = constant_set()
        sweep = d.SweepConfig(mu_grid=tuple(np.linspace(0, 6 * np.pi, 7)),
                              k2_grid=(0.0, 0.8))
        rep = d.sigma_min_sweep(cs, None, sweep)
        assert np.min(rep.min_per_mu) >= np.pi - 1e-10
        assert not rep.flagged.any()

    def test_lattice_point_kernel(self):
        # At k in 2 pi Z^2 with no shift the fiber annihilates constants.
        _, cs = constant_set(3)
        op = d.assemble_dirac(cs, None, (0.0, 0.0))
        assert d.smallest_singular_value(op) < 1e-12

    def test_positive_off_lattice(self):
        _, cs, _ = random_set(seed=4)
        op = d.assemble_dirac(cs, None, (1.0, 0.7))
        assert d.smallest_singular_value(op) > 1e-6

    def test_direction_must_be_unit(self):
        with pytest.raises(d.InadmissibleParameterError):
            d.SweepConfig(direction=(2.0, 0.0))

    def test_rows_and_floor_fit(self):
        _, cs = constant_set(3)
        sweep = d.SweepConfig(mu_grid=(0.0, np.pi, 2 * np.pi), k2_grid=(0.0,))
        rep = d.sigma_min_sweep(cs, None, sweep)
        rows = list(rep.rows())
        assert len(rows) == 3
        assert rep.floor_log_intercept is not None

    def test_workers_agree(self):
        _, cs, _ = random_set(seed=5)
        sweep = d.SweepConfig(mu_grid=(0.0, np.pi), k2_grid=(0.0, 0.5))
        a = d.sigma_min_sweep(cs, None, sweep, workers=1)
        b = d.sigma_min_sweep(cs, None, sweep, workers=3)
        assert np.array_equal(a.sigma, b.sigma)


class TestEquivalenceConstants:
    def test_constant_case_unity(self):
        _, cs = constant_set()
        c1, c2 = d.estimate_c1_c2(cs, (np.pi, 0.3), 0.0)
        assert c1 == pytest.approx(1.0, abs=1e-10)
        assert c2 == pytest.approx(1.0, abs=1e-10)

    def test_scaling_homogeneity(self):
        grid = d.FourierGrid(4, 18)
        s = 1.7
        cs = d.CoefficientSet.constant(grid, g=s, h=s)
        c1, c2 = d.estimate_c1_c2(cs, (0.9, 0.4), 0.0)
        assert c1 == pytest.approx(s**2, abs=1e-9)
        assert c2 == pytest.approx(s**2, abs=1e-9)

    def test_ordering_and_positivity(self):
        _, cs, _ = random_set(seed=6)
        c1, c2 = d.estimate_c1_c2(cs, (np.pi, 0.3), 2 * np.pi)
        assert 0 < c1 <= c2

    def test_singular_weight_error(self):
        _, cs = constant_set(2)
        with pytest.raises(d.SingularWeightError):
            d.estimate_c1_c2(cs, (0.0, 0.0), 0.0)


class TestPotentialProfile:
    def test_constant_closed_forms(self):
        grid = d.FourierGrid(3, 16)
        c = 0.8
        w = d.PeriodicScalarField.constant(grid, c)
        prof = d.potential_profile(w, b_grid=[0.0, 0.4, 0.8, 1.0],
                                   count_grid=[1, 4, 16], t_grid=[2 * np.pi, 8 * np.pi])
        # ||W_b|| = c for b < c and 0 at or above it (strict threshold).
        assert np.allclose(prof.wb_norms, [c, c, 0.0, 0.0], atol=1e-12)
        # f_W(N) = c for N >= 1.
        assert np.allclose(prof.f_values, c, atol=1e-12)
        # C_eps = c for every eps, so h_W(t) = c/t up to the smallest grid eps.
        assert np.allclose(prof.c_eps, c, atol=1e-9)
        for t, h in zip(prof.t_grid, prof.h_values):
            assert h == pytest.approx(c / t, abs=2e-8)

    def test_zero_potential(self):
        grid = d.FourierGrid(3, 16)
        w = d.PeriodicScalarField.constant(grid, 0.0)
        prof = d.potential_profile(w, b_grid=[0.0, 1.0], count_grid=[1, 4],
                                   t_grid=[2 * np.pi])
        assert np.allclose(prof.wb_norms, 0.0)
        assert np.allclose(prof.f_values, 0.0, atol=1e-12)
        assert np.allclose(prof.c_eps, 0.0, atol=1e-12)

    def test_monotonicity_tables(self):
        grid = d.FourierGrid(4, 18)
        rng = np.random.default_rng(7)
        w = d.random_trig_field(grid, rng, 2, 1.0, zero_mean=False)
        prof = d.potential_profile(w)
        assert np.all(np.diff(prof.wb_norms) <= 1e-12)
        assert np.all(np.diff(prof.f_values) >= -1e-12)
        assert np.all(np.diff(prof.h_values) <= 1e-12)
        assert np.all(np.diff(prof.htilde_values) <= 1e-12)
        assert np.all(np.diff(prof.c_eps) <= 1e-12)
        # f_W(N)/sqrt(N) is nonincreasing over the whole count grid.
        ratio = prof.f_values / np.sqrt(prof.count_grid)
        assert np.all(np.diff(ratio) <= 1e-12)

    def test_empty_grid_rejected(self):
        grid = d.FourierGrid(3, 16)
        w = d.PeriodicScalarField.constant(grid, 1.0)
        with pytest.raises(ValueError):
            d.potential_profile(w, b_grid=[])

    def test_projection_norm_bound(self):
        # ||W P^O|| <= f_W(#O) for random finite mode sets; the sampled
        # threshold norms carry a small quadrature slack.
        grid = d.FourierGrid(4, 18)
        rng = np.random.default_rng(8)
        w = d.random_trig_field(grid, rng, 2, 1.0, zero_mean=False)
        prof = d.potential_profile(w)
        conv = d.multiplication_operator(w).matrix
        for size in (1, 4, 16):
            cols = rng.choice(grid.n_modes, size=size, replace=False)
            opnorm = scipy.linalg.svdvals(conv[:, cols])[0]
            assert opnorm <= prof.f_of(size) * (1 + 2e-2)

    def test_select_threshold_b(self):
        grid = d.FourierGrid(4, 18)
        rng = np.random.default_rng(9)
        w = d.random_trig_field(grid, rng, 2, 0.5, zero_mean=False)
        prof = d.potential_profile(w)
        b = d.select_threshold_b(prof, c1=1.0)
        assert b is not None
        assert prof.htilde_of(b) ** 2 <= 1.0 / 192.0 + 1e-12
        assert d.select_threshold_b(prof, c1=1e-20) is None


@pytest.fixture(scope="module")
def multiplier_setup():
    grid = d.FourierGrid(10, 42)
    rng = np.random.default_rng(10)
    w = d.random_trig_field(grid, rng, 2, 1.0, zero_mean=False)
    return {
        "grid": grid,
        "w": w,
        "prof": d.potential_profile(w),
        "mu": 8 * np.pi,
        "weights": d.mode_weights(grid, (np.pi, 0.0), 8 * np.pi),
        "mult": d.multiplication_operator(w),
        "rng": rng,
    }


class TestMultiplierBounds:
    """Numerical consequences of the relative-bound machinery."""

    @pytest.fixture(autouse=True)
    def _bind(self, multiplier_setup):
        s = multiplier_setup
        self.grid, self.w, self.prof = s["grid"], s["w"], s["prof"]
        self.mu, self.weights, self.mult = s["mu"], s["weights"], s["mult"]
        self.rng = s["rng"]

    def _random_on(self, mask):
        v = self.rng.standard_normal(self.grid.n_modes) \
            + 1j * self.rng.standard_normal(self.grid.n_modes)
        return d.project(v, mask)

    def test_c7_bound_on_inner_supports(self):
        # ||W phi|| <= (1 + C_1(W)/pi) ||phi||_* for phi supported in T(mu/2).
        for sign, variant in (("+", "star_plus"), ("-", "star_minus")):
            ts = d.index_set_T(self.weights, self.mu / 2, sign)
            assert not ts.window_overflow
            for _ in range(10):
                phi = self._random_on(ts.mask)
                lhs = np.linalg.norm(self.mult.apply(phi))
                star = d.weighted_norm(phi, self.weights, "star")
                assert lhs <= self.prof.c7 * star * (1 + 1e-9)
                # on these supports the star and signed norms coincide
                assert star == pytest.approx(
                    d.weighted_norm(phi, self.weights, variant), rel=1e-12)

    def test_h_bound_on_annulus(self):
        # ||W phi|| <= h_W(a) ||phi||_* for phi supported in T(mu/2) \ T(a).
        a = 4 * np.pi
        for sign in ("+", "-"):
            outer = d.index_set_T(self.weights, self.mu / 2, sign)
            inner = d.index_set_T(self.weights, a, sign)
            annulus = outer.mask & ~inner.mask
            bound = self.prof.h_of(a)
            for _ in range(10):
                phi = self._random_on(annulus)
                lhs = np.linalg.norm(self.mult.apply(phi))
                assert lhs <= bound * d.weighted_norm(phi, self.weights, "star") * (1 + 1e-9)

    def test_3h_bound_off_both_sets(self):
        # ||W phi|| <= 3 h_W(mu) ||phi||_* off T^+(mu/2) union T^-(mu/2).
        tp = d.index_set_T(self.weights, self.mu / 2, "+")
        tm = d.index_set_T(self.weights, self.mu / 2, "-")
        outside = ~(tp.mask | tm.mask)
        bound = 3 * self.prof.h_of(self.mu)
        for _ in range(10):
            phi = self._random_on(outside)
            lhs = np.linalg.norm(self.mult.apply(phi))
            assert lhs <= bound * d.weighted_norm(phi, self.weights, "star") * (1 + 1e-9)

    def test_htilde_bound_at_b0(self):
        # W_0 = W wherever W is nonzero, so ||W phi|| <= htilde(0) ||phi||_{*,pm}.
        bound = self.prof.htilde_of(0.0)
        for variant in ("star_plus", "star_minus"):
            for _ in range(5):
                v = self.rng.standard_normal(self.grid.n_modes) \
                    + 1j * self.rng.standard_normal(self.grid.n_modes)
                lhs = np.linalg.norm(self.mult.apply(v))
                assert lhs <= bound * d.weighted_norm(v, self.weights, variant) * (1 + 1e-9)


class TestWiener:
    def test_orthogonality_trivial(self):
        grid = d.FourierGrid(3, 16)
        w = d.PeriodicScalarField.constant(grid, 1.0)
        psi = d.PeriodicScalarField.constant(grid, 0.0)
        rep = d.wiener_average(w, psi, 64, 0.5)
        assert np.max(rep.averages) < 1e-24

    def test_single_resonance(self):
        grid = d.FourierGrid(3, 16)
        w = d.PeriodicScalarField.from_modes(grid, {(0, 1): 1.0})
        psi = d.PeriodicScalarField.constant(grid, 0.0)
        rep = d.wiener_average(w, psi, 128, 0.5)
        n = np.arange(1, 129)
        assert np.max(np.abs(rep.averages - 1.0 / n)) < 1e-12
        assert rep.m_plus == (1,)
        assert rep.density_plus == pytest.approx(1.0 / 128)

    def test_resolution_error(self):
        grid = d.FourierGrid(3, 16)
        w = d.PeriodicScalarField.constant(grid, 1.0)
        psi = d.PeriodicScalarField.constant(grid, 0.0)
        with pytest.raises(d.ResolutionError):
            d.wiener_average(w, psi, 256, 0.5, resolution=(16, 64))

    def test_gauge_psi_decay(self):
        grid = d.FourierGrid(6, 26)
        rng = np.random.default_rng(11)
        inst = d.random_gamma_instance(grid, rng, degree=2, variation=0.3)
        can = d.solve_canonical_gauge(inst)
        w = d.random_trig_field(grid, rng, 2, 1.0, zero_mean=False)
        rep = d.wiener_average(w, can.psi, 256, 0.1)
        assert rep.average_at(256) < rep.average_at(64)

    def test_kernel_fallback_agreement(self):
        rng = np.random.default_rng(12)
        w = rng.standard_normal(300) + 1j * rng.standard_normal(300)
        z = np.exp(1j * rng.standard_normal(300))
        fast = power_moments(w, z, 50)
        slow = power_moments(w, z, 50, force_numpy=True)
        assert np.max(np.abs(fast - slow)) < 1e-13


class TestCoercivity:
    def test_margins_nonnegative_free_case(self):
        grid = d.FourierGrid(10, 42)
        cs = d.CoefficientSet.constant(grid)
        zero = d.PeriodicScalarField.constant(grid, 0.0)
        rep = d.verify_coercivity(cs, zero, zero, zero, 16 * np.pi, 4 * np.pi,
                                  (np.pi, 0.0), trials=40, seed=0)
        assert rep.margins.min() >= 0.0
        assert rep.c1 == pytest.approx(1.0, abs=1e-9)
        assert rep.c8 <= rep.c1 / 6 + 1e-12

    def test_single_mode_margin(self):
        grid = d.FourierGrid(10, 42)
        cs = d.CoefficientSet.constant(grid)
        zero = d.PeriodicScalarField.constant(grid, 0.0)
        mu, a, k = 16 * np.pi, 4 * np.pi, (np.pi, 0.0)
        weights = d.mode_weights(grid, k, mu)
        ts = d.index_set_T(weights, a, "+")
        idx = int(np.nonzero(ts.mask)[0][0])
        phi = np.zeros(2 * grid.n_modes, dtype=complex)
        phi[idx] = 1.0
        op = d.coercivity_operator(cs, zero, zero, zero, mu, k)
        lhs = float(np.sum(np.abs(op.apply(phi)) ** 2))
        rhs = (1.0 / 6.0) * weights.g_min[idx] ** 2
        margin = lhs - rhs
        expected = (1 - 1 / 6) * weights.g_plus[idx] ** 2
        assert margin == pytest.approx(expected, rel=1e-10)

    def test_zero_trial_margin_zero(self):
        grid = d.FourierGrid(10, 42)
        cs = d.CoefficientSet.constant(grid)
        zero = d.PeriodicScalarField.constant(grid, 0.0)
        op = d.coercivity_operator(cs, zero, zero, zero, 16 * np.pi, (np.pi, 0.0))
        phi = np.zeros(2 * grid.n_modes, dtype=complex)
        assert np.sum(np.abs(op.apply(phi)) ** 2) == 0.0

    def test_k1_precondition(self):
        grid = d.FourierGrid(10, 42)
        cs = d.CoefficientSet.constant(grid)
        zero = d.PeriodicScalarField.constant(grid, 0.0)
        with pytest.raises(d.InadmissibleParameterError):
            d.verify_coercivity(cs, zero, zero, zero, 16 * np.pi, 4 * np.pi,
                                (0.5, 0.0), trials=2)

    def test_excluded_scaling_warning(self):
        grid = d.FourierGrid(10, 42)
        cs = d.CoefficientSet.constant(grid)
        zero = d.PeriodicScalarField.constant(grid, 0.0)
        w = d.PeriodicScalarField.from_modes(grid, {(0, 1): 1.0})
        psi0 = d.PeriodicScalarField.constant(grid, 0.0)
        wrep = d.wiener_average(w, psi0, 64, 1e-9)
        mu = np.pi * wrep.m_plus[0]
        with pytest.raises(d.InadmissibleParameterError):
            # mu = pi is below 2 pi for the radius precondition; use a valid a
            # but an excluded nu by scaling the report artificially.
            d.verify_coercivity(cs, zero, zero, zero, mu, np.pi, (np.pi, 0.0), trials=1)
        rep = d.verify_coercivity(cs, zero, zero, zero, 16 * np.pi, 4 * np.pi,
                                  (np.pi, 0.0), trials=2,
                                  admissibility=[wrep] if 16 in wrep.m_plus else None)
        assert isinstance(rep.warnings, tuple)


class TestCrossTerm:
    def test_random_trials_below_one(self):
        grid = d.FourierGrid(9, 38)
        rng = np.random.default_rng(13)
        w = d.random_trig_field(grid, rng, 3, 1.0, zero_mean=False)
        weights = d.mode_weights(grid, (np.pi, 0.0), 12 * np.pi)
        rep = d.cross_term_check(w, weights, 2.2 * np.pi, 4.4 * np.pi, n_trials=50, seed=1)
        assert rep.max_ratio <= 1.0

    def test_disjoint_frequency_supports(self):
        grid = d.FourierGrid(9, 38)
        rng = np.random.default_rng(14)
        w = d.random_trig_field(grid, rng, 1, 1.0)
        weights = d.mode_weights(grid, (np.pi, 0.0), 12 * np.pi)
        rep = d.cross_term_check(w, weights, 2.2 * np.pi, 2.2 * np.pi + 3.1 * np.pi,
                                 n_trials=10, seed=2)
        assert rep.bound_constant == 0.0
        assert rep.zero_bound_cases == 20
        assert rep.max_ratio == 0.0

    def test_zero_potential(self):
        grid = d.FourierGrid(9, 38)
        w = d.PeriodicScalarField.constant(grid, 0.0)
        weights = d.mode_weights(grid, (np.pi, 0.0), 12 * np.pi)
        rep = d.cross_term_check(w, weights, 2.2 * np.pi, 4.4 * np.pi, n_trials=5, seed=3)
        assert rep.max_ratio == 0.0

    def test_support_violation(self):
        grid = d.FourierGrid(9, 38)
        rng = np.random.default_rng(15)
        w = d.random_trig_field(grid, rng, 2, 1.0)
        weights = d.mode_weights(grid, (np.pi, 0.0), 12 * np.pi)
        bad = np.ones(grid.n_modes, dtype=complex)
        with pytest.raises(d.SupportViolationError):
            d.cross_term_check(w, weights, 2.2 * np.pi, 4.4 * np.pi,
                               pairs=[(bad, bad, "+")])

    def test_radius_preconditions(self):
        grid = d.FourierGrid(9, 38)
        w = d.PeriodicScalarField.constant(grid, 1.0)
        weights = d.mode_weights(grid, (np.pi, 0.0), 12 * np.pi)
        with pytest.raises(d.InadmissibleParameterError):
            d.cross_term_check(w, weights, np.pi, 4 * np.pi)
        with pytest.raises(d.InadmissibleParameterError):
            d.cross_term_check(w, weights, 2.5 * np.pi, 7 * np.pi)


class TestSplitPotential:
    def test_identity_at_zero_rotation(self):
        grid = d.FourierGrid(4, 18)
        rng = np.random.default_rng(16)
        V = d.MatrixPotential(
            v0=d.random_trig_field(grid, rng, 2, 0.5),
            v1=d.random_trig_field(grid, rng, 2, 0.5),
            v2=d.random_trig_field(grid, rng, 2, 0.5),
            v3=d.random_trig_field(grid, rng, 2, 0.5),
        )
        zero = d.PeriodicScalarField.constant(grid, 0.0)
        sp = d.split_potential(V, b=10.0, psi_prime=zero)
        assert np.max(np.abs(sp.vtilde0.coeffs - V.v0.coeffs)) < 1e-12
        assert np.max(np.abs(sp.vtilde3.coeffs - V.v3.coeffs)) < 1e-12

    def test_threshold_above_range(self):
        grid = d.FourierGrid(4, 18)
        rng = np.random.default_rng(17)
        V = d.MatrixPotential(
            v0=d.PeriodicScalarField.constant(grid, 0.0),
            v1=d.random_trig_field(grid, rng, 2, 0.5),
            v2=d.random_trig_field(grid, rng, 2, 0.5),
            v3=d.PeriodicScalarField.constant(grid, 0.0),
        )
        zero = d.PeriodicScalarField.constant(grid, 0.0)
        sp = d.split_potential(V, b=1.0, psi_prime=zero)
        assert np.max(np.abs(sp.v1_tail.coeffs)) < 1e-13
        assert np.max(np.abs(sp.v2_tail.coeffs)) < 1e-13
        assert np.max(np.abs(sp.v1_bounded.coeffs - V.v1.coeffs)) < 1e-13

    def test_split_parts_sum_back(self):
        grid = d.FourierGrid(4, 18)
        rng = np.random.default_rng(18)
        V = d.MatrixPotential(
            v0=d.PeriodicScalarField.constant(grid, 0.0),
            v1=d.random_trig_field(grid, rng, 2, 1.0),
            v2=d.random_trig_field(grid, rng, 2, 1.0),
            v3=d.PeriodicScalarField.constant(grid, 0.0),
        )
        zero = d.PeriodicScalarField.constant(grid, 0.0)
        sp = d.split_potential(V, b=0.5, psi_prime=zero)
        assert np.max(np.abs((sp.v1_tail.coeffs + sp.v1_bounded.coeffs)
                             - V.v1.coeffs)) < 1e-12

    def test_hyperbolic_identity(self):
        grid = d.FourierGrid(4, 18)
        c = 0.35
        V = d.MatrixPotential.diagonal(grid, v0=1.0, v3=0.0)
        psi_prime = d.PeriodicScalarField.constant(grid, c)
        sp = d.split_potential(V, b=0.0, psi_prime=psi_prime)
        i0 = grid.mode_index(0, 0)
        assert sp.vtilde0.coeffs[i0] == pytest.approx(np.cosh(2 * c), abs=1e-12)
        assert sp.vtilde3.coeffs[i0] == pytest.approx(np.sinh(2 * c), abs=1e-12)
        diff = sp.vtilde0.coeffs[i0] ** 2 - sp.vtilde3.coeffs[i0] ** 2
        assert diff == pytest.approx(1.0, abs=1e-12)


class TestAdmissibilityRecipe:
    def test_band_limited_ladder(self):
        _, cs, _ = random_set(m=8, seed=19)
        c1, c2 = d.estimate_c1_c2(cs, (np.pi, 0.3), 4 * np.pi)
        c8 = c1**2 / (6 * (c1 + 4.0))
        rep = d.admissibility_recipe(cs, c1, c2, c8, a1=4 * np.pi)
        assert rep.feasible
        assert rep.theta > 0
        assert all(b > a for a, b in zip(rep.radii_head, rep.radii_head[1:]))
        assert rep.a_j >= rep.a1
        # degree-2 coefficients: products are band-limited to radius 4, so the
        # zero-tail gap never exceeds 2 pi * |(4, 4)|
        if rep.constant_gap is not None:
            assert rep.constant_gap <= 2 * np.pi * np.hypot(4, 4) + 1e-6

    def test_a1_precondition(self):
        _, cs, _ = random_set(m=4, seed=20)
        with pytest.raises(d.InadmissibleParameterError):
            d.admissibility_recipe(cs, 1.0, 2.0, 0.1, a1=np.pi)
