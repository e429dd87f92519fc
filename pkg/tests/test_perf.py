import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import erfc, exp1, gammaincc

import fadeperf.fading as fd
import fadeperf.perf as pf
from fadeperf.mellin import meijer_g
from fadeperf.perf import JointMgf, MetricSpec

BPSK = MetricSpec.bep_coherent_psk()
DPSK = MetricSpec.bep_dpsk()
BFSK = MetricSpec.bep_coherent_fsk()
NCFSK = MetricSpec.bep_noncoherent_fsk()
CAP = MetricSpec.capacity(1.0)

TABLE_METRICS = [BPSK, DPSK, BFSK, NCFSK, MetricSpec.bep_correlated(0.4), CAP]

RAYLEIGH_BPSK_10 = 0.5 * (1.0 - math.sqrt(10.0 / 11.0))  # 0.0232687...
RAYLEIGH_CAP_1 = math.e * float(exp1(1.0))  # 0.5963474...


class TestMetricSpec:
    def test_table_presets(self):
        assert (BPSK.a, BPSK.b, BPSK.n) == (1.0, 0.5, 1)
        assert (NCFSK.a, NCFSK.b, NCFSK.n) == (0.5, 1.0, 1)
        assert (CAP.a, CAP.b, CAP.n) == (1.0, 1.0, 2)

    def test_inconsistent_rejected(self):
        with pytest.raises(ValueError):
            MetricSpec(1.0, 1.0, 2, pf.MetricKind.BEP_DPSK)
        with pytest.raises(ValueError):
            MetricSpec(1.0, 0.5, 2, pf.MetricKind.CAPACITY)
        with pytest.raises(ValueError):
            MetricSpec.custom(1.0, 1.5, 1)
        with pytest.raises(ValueError):
            MetricSpec.custom(-1.0, 0.5, 1)


class TestConditional:
    def test_bep_at_zero(self):
        for met in (BPSK, DPSK, BFSK, NCFSK):
            assert pf.conditional_up(met, 0.0) == pytest.approx(0.5, rel=1e-14)

    def test_bpsk_erfc(self):
        assert pf.conditional_up(BPSK, 2.0) == pytest.approx(
            float(erfc(math.sqrt(2.0))) / 2.0, rel=1e-12
        )

    def test_capacity_one_nat(self):
        assert pf.conditional_up(CAP, math.e - 1.0) == pytest.approx(1.0, rel=1e-14)

    def test_domain(self):
        with pytest.raises(ValueError):
            pf.conditional_up(BPSK, -1.0)

    def test_bep_range(self):
        for g in (0.0, 0.5, 3.0, 50.0):
            v = pf.conditional_up(BPSK, g)
            assert 0.0 <= v <= 0.5


class TestIdentities:
    def test_dpsk_limit_form(self):
        ids = pf.conditional_up_identities(DPSK, 1.0)
        assert ids["production"] == pytest.approx(math.exp(-1.0) / 2.0, rel=1e-13)
        assert abs(ids["beta_limit_d"] - ids["production"]) <= 1e-5

    def test_capacity_forms(self):
        ids = pf.conditional_up_identities(CAP, 1.0)
        assert ids["beta_capacity"] == pytest.approx(math.log(2.0), rel=1e-10)
        assert ids["gauss_2f1"] == pytest.approx(math.log(2.0), rel=1e-11)

    def test_bpsk_pfq_form(self):
        ids = pf.conditional_up_identities(BPSK, 4.0)
        assert ids["pfq"] == pytest.approx(ids["production"], rel=1e-9)

    def test_representation_coherence(self):
        # Eq. (1)/(3) fast path vs series vs contour, pairwise, across the
        # metric table and the SNR decades (values above 1e-12 only).
        for met in TABLE_METRICS:
            for g in (0.01, 0.1, 1.0, 10.0, 100.0):
                ids = pf.conditional_up_identities(met, g)
                vals = [ids["production"], ids["pfq"], ids["meijer_g"]]
                if max(abs(v) for v in vals) < 1e-12:
                    continue
                for v in vals[1:]:
                    assert v == pytest.approx(vals[0], rel=1e-6)


class TestSingleLink:
    def test_dpsk_rayleigh(self):
        got = pf.aup_single_quadrature(fd.Exponential(10.0), DPSK)
        assert got == pytest.approx(1.0 / 22.0, rel=1e-10)

    def test_bpsk_rayleigh(self):
        got = pf.aup_single_quadrature(fd.Exponential(10.0), BPSK)
        assert got == pytest.approx(RAYLEIGH_BPSK_10, rel=1e-9)

    def test_capacity_rayleigh(self):
        got = pf.aup_single_quadrature(fd.Exponential(1.0), CAP)
        assert got == pytest.approx(RAYLEIGH_CAP_1, rel=1e-9)

    def test_closed_matches_quadrature_gg(self):
        model = fd.GeneralizedGamma(2.0, 1.0, 10.0)
        closed = pf.aup_single(model, DPSK)
        quad = pf.aup_single_quadrature(model, DPSK)
        assert closed == pytest.approx(quad, rel=1e-6)

    def test_closed_bpsk_rayleigh(self):
        got = pf.aup_single(fd.Exponential(10.0), BPSK)
        assert got == pytest.approx(RAYLEIGH_BPSK_10, rel=1e-9)

    def test_closed_capacity_nakagami_m1(self):
        got = pf.aup_single(fd.Nakagami(1.0, 1.0), CAP)
        assert got == pytest.approx(RAYLEIGH_CAP_1, rel=1e-9)

    def test_gnm_direct_form(self):
        assert pf.aup_gnm(1.0, 1.0, 10.0, BPSK) == pytest.approx(
            RAYLEIGH_BPSK_10, rel=1e-9
        )

    def test_lognormal_point_mass_limit(self):
        got = pf.aup_lognormal(0.0, 1e-12, 20, CAP)
        assert got == pytest.approx(math.log(2.0), rel=1e-9)

    def test_lognormal_bep_reduction(self):
        # (1/2 sqrt(pi)) sum w_k Gamma(b, a om_k)/Gamma(b)
        model = fd.Lognormal(3.0, 4.0, 20)
        w, om = fd._lognormal_mixture(model)
        want = float(np.sum(w * gammaincc(0.5, 1.0 * om))) / 2.0
        got = pf.aup_lognormal(3.0, 4.0, 20, BPSK)
        assert got == pytest.approx(want, rel=1e-12)

    def test_lognormal_closed_matches_hyper_route(self):
        got = pf.aup_single(fd.Lognormal(0.0, 4.0, 16), CAP)
        want = pf.aup_lognormal(0.0, 4.0, 16, CAP)
        assert got == pytest.approx(want, rel=1e-8)

    def test_egk_shadowing_vanishes(self):
        got = pf.aup_egk(1.0, 1.0, 500.0, 1.0, 10.0, DPSK)
        assert got == pytest.approx(1.0 / 22.0, rel=0.01)

    def test_egk_matches_quadrature(self):
        model = fd.EGK(2.0, 0.5, 1.5, 2.0, 5.0)
        got = pf.aup_egk(2.0, 0.5, 1.5, 2.0, 5.0, BPSK)
        want = pf.aup_single_quadrature(model, BPSK)
        assert got == pytest.approx(want, rel=1e-8)
        assert pf.aup_single(model, BPSK) == pytest.approx(want, rel=1e-8)

    @pytest.mark.parametrize(
        "model",
        [
            fd.Exponential(1.0),
            fd.Nakagami(2.5, 10.0),
            fd.Weibull(1.8, 3.0),
            fd.Hoyt(0.5, 2.0),
            fd.Rice(1.5, 5.0),
            fd.Maxwell(1.0),
            fd.KDist(1.8, 3.0),
            fd.GeneralizedK(2.0, 1.5, 5.0),
            fd.GeneralizedGamma(2.0, 0.25, 10.0),
            fd.HyperGamma(((0.3, 1.0, 2.0), (0.7, 2.5, 5.0))),
        ],
        ids=lambda m: type(m).__name__,
    )
    def test_catalog_closed_vs_quadrature(self, model):
        for met in (BPSK, CAP):
            closed = pf.aup_single(model, met)
            quad = pf.aup_single_quadrature(model, met)
            tol = 2e-3 if isinstance(model, (fd.Hoyt, fd.Rice)) else 1e-5
            assert closed == pytest.approx(quad, rel=tol)


class TestMrc:
    def test_kernel_closed_forms_vs_contour(self):
        for b in (0.5, 1.0):
            met = MetricSpec.custom(1.0, b, 1)
            for s in (0.4, 2.0, 9.0):
                closed = pf.theorem3_kernel(met, s)
                contour = meijer_g(1, 1, 2, 2, [1.0, 1.0], [b, 0.0], 1.0 / s)
                if b == 1.0 and abs(closed) < 1e-12:
                    assert abs(contour) < 1e-8
                else:
                    assert closed == pytest.approx(contour, rel=1e-8)
        for s in (0.4, 2.0, 9.0):
            closed = pf.theorem3_kernel(CAP, s)
            contour = meijer_g(1, 2, 3, 2, [1.0, 1.0, 1.0], [1.0, 0.0], 1.0 / s)
            assert closed == pytest.approx(contour, rel=1e-8)

    def test_single_branch_reduces_to_single_link(self):
        got = pf.aup_mrc_independent([fd.Exponential(10.0)], DPSK)
        assert got == pytest.approx(1.0 / 22.0, rel=1e-9)

    def test_iid_rayleigh_product(self):
        for L in (1, 2, 3):
            got = pf.aup_mrc_independent([fd.Exponential(10.0)] * L, DPSK, N=64)
            assert got == pytest.approx(0.5 * 11.0**-L, rel=1e-9)

    def test_noniid_product(self):
        models = [fd.Exponential(g) for g in (1.0, 2.0, 4.0)]
        got = pf.aup_mrc_independent(models, DPSK)
        assert got == pytest.approx(0.5 / 30.0, rel=1e-9)

    def test_capacity_two_branch_gamma_sum(self):
        got = pf.aup_mrc_independent([fd.Exponential(1.0)] * 2, CAP)
        oracle, _ = integrate.quad(
            lambda g: math.log1p(g) * g * math.exp(-g), 0.0, np.inf
        )
        assert got == pytest.approx(oracle, rel=1e-9)

    def test_bpsk_single_branch(self):
        got = pf.aup_mrc_independent([fd.Exponential(10.0)], BPSK)
        assert got == pytest.approx(RAYLEIGH_BPSK_10, rel=1e-9)

    def test_identical_nakagami_closed(self):
        assert pf.aup_nakagami_identical_mrc(1.0, 10.0, 2, DPSK) == pytest.approx(
            0.5 / 121.0, rel=1e-9
        )
        assert pf.aup_nakagami_identical_mrc(1.0, 10.0, 1, BPSK) == pytest.approx(
            RAYLEIGH_BPSK_10, rel=1e-9
        )

    def test_identical_nakagami_capacity_quadrature(self):
        # m=2, L=2, gbar=1: combiner SNR ~ Gamma(4, scale 1/2).
        got = pf.aup_nakagami_identical_mrc(2.0, 1.0, 2, CAP)
        oracle, _ = integrate.quad(
            lambda g: math.log1p(g) * 2.0**4 * g**3 * math.exp(-2.0 * g) / 6.0,
            0.0,
            np.inf,
        )
        assert got == pytest.approx(oracle, rel=1e-5)

    def test_printed_abep_g_form(self):
        # G^{1,2}_{2,2}[m/(a gbar) | 1, 1-b; mL, 0] / (2 Gamma(b) Gamma(mL))
        # with the front-lower entry mL (the strip-consistent reading).
        m, gbar, L, b = 1.0, 10.0, 2, 1.0
        gval = meijer_g(
            1, 2, 2, 2, [1.0, 1.0 - b], [m * L, 0.0], m / (1.0 * gbar)
        )
        got = gval / (2.0 * math.gamma(b) * math.gamma(m * L))
        assert got == pytest.approx(0.5 / 121.0, rel=1e-8)

    def test_printed_capacity_g_form(self):
        # G^{3,1}_{2,3}[m/(a gbar) | 0, 1; 0, 0, mL] / Gamma(mL)
        m, gbar, L = 1.0, 1.0, 2
        gval = meijer_g(3, 1, 2, 3, [0.0, 1.0], [0.0, 0.0, m * L], m / gbar)
        got = gval / math.gamma(m * L)
        oracle, _ = integrate.quad(
            lambda g: math.log1p(g) * g * math.exp(-g), 0.0, np.inf
        )
        assert got == pytest.approx(oracle, rel=1e-8)

    def test_identical_matches_general_route(self):
        for met in (BPSK, DPSK, CAP):
            closed = pf.aup_nakagami_identical_mrc(2.0, 10.0, 2, met)
            general = pf.aup_mrc_independent([fd.Nakagami(2.0, 10.0)] * 2, met)
            assert general == pytest.approx(closed, rel=1e-5)

    def test_mrc_over_gnm_matches_sum_quadrature(self):
        # Two i.i.d. GNM branches: oracle by quadrature over the pdf of the
        # sum (numerical convolution via 2-D reduction).
        model = fd.GeneralizedGamma(2.0, 0.5, 3.0)
        got = pf.aup_mrc_independent([model] * 2, DPSK)
        inner = lambda t: fd.pdf(model, t)

        def outer(u):
            val, _ = integrate.quad(
                lambda t: inner(t) * inner(u - t), 0.0, u, limit=100
            )
            return val * pf.conditional_up(DPSK, u)

        oracle, _ = integrate.quad(outer, 0.0, 60.0, limit=200)
        assert got == pytest.approx(oracle, rel=1e-6)

    def test_gcq_raw_estimator_behavior(self):
        # The printed N-node rule converges ~N^-2; document its real accuracy.
        exact = 0.5 / 11.0
        err64 = abs(
            pf.aup_mrc_independent([fd.Exponential(10.0)], DPSK, N=64, method="gcq")
            - exact
        )
        err256 = abs(
            pf.aup_mrc_independent([fd.Exponential(10.0)], DPSK, N=256, method="gcq")
            - exact
        )
        assert err64 / exact < 0.02
        assert err256 < err64 / 8.0  # ~N^-2 scaling

    def test_gcq_capacity_raw(self):
        got = pf.aup_mrc_independent([fd.Exponential(1.0)], CAP, N=256, method="gcq")
        assert got == pytest.approx(RAYLEIGH_CAP_1, rel=1e-3)

    def test_joint_mgf_fd_fallback(self):
        joint = JointMgf(eval=lambda s: 1.0 / (1.0 + 10.0 * s))
        got = pf.aup_mrc(joint, DPSK)
        assert got == pytest.approx(1.0 / 22.0, rel=1e-5)

    def test_joint_mgf_check(self):
        good = pf.product_joint_mgf([fd.Exponential(1.0)])
        good.check()
        bad = JointMgf(eval=lambda s: 0.9)
        with pytest.raises(ValueError):
            bad.check()

    def test_unsupported_metric(self):
        joint = pf.product_joint_mgf([fd.Exponential(1.0)])
        with pytest.raises(ValueError):
            pf.aup_mrc(joint, MetricSpec.custom(1.0, 0.5, 2))

    def test_diversity_order(self):
        for gbar in (1.0, 10.0):
            beps = [
                pf.aup_mrc_independent([fd.Exponential(gbar)] * L, BPSK)
                for L in (1, 2, 3)
            ]
            caps = [
                pf.aup_mrc_independent([fd.Exponential(gbar)] * L, CAP)
                for L in (1, 2, 3)
            ]
            assert beps[0] > beps[1] > beps[2]
            assert caps[0] < caps[1] < caps[2]


class TestMonotonicity:
    def test_bep_decreasing_capacity_increasing(self):
        gbars = [10.0 ** (db / 10.0) for db in range(0, 21, 5)]
        for model_of in (fd.Exponential, lambda g: fd.GeneralizedGamma(2.0, 0.5, g)):
            beps = [pf.aup_single(model_of(g), BPSK) for g in gbars]
            caps = [pf.aup_single(model_of(g), CAP) for g in gbars]
            assert all(a > b for a, b in zip(beps, beps[1:]))
            assert all(a < b for a, b in zip(caps, caps[1:]))


class TestGenericMetricSurface:
    def test_custom_abn_through_contour(self):
        # A non-table (a, b, n) combination: conditional via Eq.-10 contour
        # against direct quadrature of the averaged value.
        met = MetricSpec.custom(0.7, 0.8, 1)
        model = fd.Exponential(3.0)
        closed = pf.aup_single(model, met)
        quad = pf.aup_single_quadrature(model, met)
        assert closed == pytest.approx(quad, rel=1e-7)

    def test_custom_n2_conditional(self):
        met = MetricSpec.custom(1.0, 0.6, 2)
        got = pf.conditional_up(met, 2.0)
        ids = pf.conditional_up_identities(met, 2.0)
        assert got == pytest.approx(ids["pfq"], rel=1e-7)
