import math

import numpy as np
import pytest

from dcdrls.baselines import GdMcc, Lms, RLS, RMCC, RobustRLS
from dcdrls.dcd import DcdConfig
from dcdrls.exc import DivergenceError, UsageError
from dcdrls.filter import DcdFilter
from dcdrls.robust import MCC, MEstimate
from dcdrls.signals import gen_channel, nmsd, tapped_delay


@pytest.fixture
def system():
    rng = np.random.default_rng(4)
    M, n = 4, 500
    X = tapped_delay(rng.standard_normal(n), M)
    w_o = gen_channel("disperse", M, rng).w_o
    d = X @ w_o + 0.1 * rng.standard_normal(n)
    yield X, d, w_o


class TestRLS:
    def test_scalar(self):
        rls = RLS(1, lam=1., delta0=1.)
        assert rls.step([1.], 1.) == 1.
        assert rls.w_hat[0] == pytest.approx(0.5)
        assert rls.P[0, 0] == pytest.approx(0.5)

    def test_zero_input(self):
        rls = RLS(3, lam=0.5, delta0=2.)
        rls.step(np.zeros(3), 1.)
        np.testing.assert_array_equal(rls.w_hat, 0.)
        np.testing.assert_allclose(rls.P, np.eye(3) / 2. / 0.5)

    def test_matches_normal_equations(self, system):
        X, d, _ = system
        lam, delta0 = 0.99, 1.
        rls = RLS(4, lam=lam, delta0=delta0)
        R = delta0 * np.eye(4)
        p = np.zeros(4)
        for x, dn in zip(X, d):
            rls.step(x, dn)
            R = lam * R + np.outer(x, x)
            p = lam * p + dn * x
        np.testing.assert_allclose(rls.w_hat, np.linalg.solve(R, p), atol=1e-8)

    def test_symmetric_inverse(self, system):
        X, d, _ = system
        rls = RLS(4, lam=0.99)
        rls.run(X, d)
        np.testing.assert_array_equal(rls.P, rls.P.T)
        assert rls.n == len(d)

    @pytest.mark.parametrize("kwargs", [
        dict(M=0), dict(M=4, lam=0.), dict(M=4, lam=2.), dict(M=4, delta0=-1.),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(UsageError):
            RLS(**kwargs)

    def test_wrong_length(self):
        with pytest.raises(UsageError):
            RLS(4).step(np.ones(3), 0.)


class TestRMCC:
    def test_wide_kernel_matches_rls(self, system):
        X, d, w_o = system
        # keep errors small so the kernel stays numerically at one
        scale = 0.01
        d = X @ (scale * w_o) + 0.001 * (d - X @ w_o)
        rmcc = RMCC(4, lam=0.99, delta0=1., beta2=1e6)
        rls = RLS(4, lam=0.99, delta0=1.)
        for x, dn in zip(X, d):
            rmcc.step(x, dn)
            rls.step(x, dn)
        np.testing.assert_allclose(rmcc.w_hat, rls.w_hat, atol=1e-9)

    def test_rejects_impulse(self, system):
        X, d, _ = system
        rmcc = RMCC(4, lam=0.99, beta2=0.03)
        rmcc.run(X[:-1], d[:-1])
        w_prev = rmcc.w_hat.copy()
        P_prev = rmcc.P.copy()
        rmcc.step(X[-1], d[-1] + 1e3)
        np.testing.assert_array_equal(rmcc.w_hat, w_prev)
        np.testing.assert_allclose(rmcc.P, P_prev / 0.99)

    def test_close_to_dcd_variant(self):
        rng = np.random.default_rng(9)
        M, n = 8, 2000
        X = tapped_delay(rng.standard_normal(n), M)
        w_o = gen_channel("disperse", M, rng).w_o
        d = X @ w_o + 0.1 * rng.standard_normal(n)

        exact = RMCC(M, lam=0.99, delta0=1., beta2=0.5)
        dcd = DcdFilter(M, lam=0.99, delta0=1., strategy=MCC(0.5),
                        dcd=DcdConfig(Mb=16, Nu=4 * M))
        gap = []
        for k, (x, dn) in enumerate(zip(X, d)):
            exact.step(x, dn)
            dcd.step(x, dn)
            if k >= 500:
                gap.append(nmsd(dcd.w_hat, w_o) - nmsd(exact.w_hat, w_o))
        assert np.max(np.abs(gap)) <= 0.5


def test_robust_rls_with_mestimate(system):
    X, d, _ = system
    flt = RobustRLS(4, lam=0.99, strategy=MEstimate())
    flt.run(X[:-1], d[:-1])
    w_prev = flt.w_hat.copy()
    flt.step(X[-1], d[-1] + 50.)
    np.testing.assert_array_equal(flt.w_hat, w_prev)
    assert flt.snapshot()["kind"] == "RobustRLS"


class TestGdMcc:
    def test_single_step(self):
        flt = GdMcc(2, mu=0.1, beta2=2.)
        e = flt.step([1., -1.], 2.)
        assert e == 2.
        expected = 0.1 * math.exp(-1.) * 2.
        np.testing.assert_allclose(flt.w_hat, [expected, -expected])

    def test_converges(self, system):
        X, d, w_o = system
        flt = GdMcc(4, mu=0.05, beta2=0.6)
        flt.run(X, d)
        assert nmsd(flt.w_hat, w_o) < -10

    def test_invalid(self):
        with pytest.raises(UsageError):
            GdMcc(4, mu=0.)
        with pytest.raises(UsageError):
            GdMcc(4, beta2=0.)


class TestLms:
    def test_scalar(self):
        lms = Lms(1, mu=0.5)
        assert lms.step([2.], 1.) == 1.
        assert lms.w_hat[0] == 1.

    def test_zero_input(self):
        lms = Lms(2, mu=0.5)
        lms.step([0., 0.], 3.)
        np.testing.assert_array_equal(lms.w_hat, 0.)

    def test_converges(self, system):
        X, d, w_o = system
        lms = Lms(4, mu=0.02)
        lms.run(X, d)
        assert nmsd(lms.w_hat, w_o) < -10

    def test_divergence(self, system):
        X, d, _ = system
        lms = Lms(4, mu=10.)
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(DivergenceError):
                lms.run(X, d)

    def test_invalid(self):
        with pytest.raises(UsageError):
            Lms(4, mu=-1.)


if __name__ == "__main__":
    pytest.main([__file__])
