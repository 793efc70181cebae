import os.path as osp

import numpy as np
import pytest

from dcdrls.dcd import DcdConfig, Complexity, dcd_solve, count_ops, complexity
from dcdrls.exc import UsageError
from dcdrls.util import data_path


@pytest.fixture
def spd4():
    data = np.loadtxt(osp.join(data_path(), "spd4.txt"))
    yield data[:4], data[4]


def random_system(rng, M, H=1.):
    A = rng.standard_normal((M, M))
    R = 0.1 * A @ A.T / M + np.eye(M)
    w = rng.uniform(-0.45 * H, 0.45 * H, M)
    return R, R @ w, w


class TestDcdConfig:
    def test_defaults(self):
        cfg = DcdConfig()
        assert cfg.H == 1.
        assert cfg.Mb == 16
        assert cfg.Nu == 8
        assert cfg.quantum == 2. ** -16

    @pytest.mark.parametrize("kwargs", [
        dict(H=3.), dict(H=0.), dict(H=-2.), dict(H=float("inf")),
        dict(Mb=0), dict(Mb=1.5), dict(Nu=-1),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(UsageError):
            DcdConfig(**kwargs)

    def test_fractional_power_of_two(self):
        assert DcdConfig(H=0.25).quantum == 0.25 * 2. ** -16


class TestDcdSolve:
    def test_random_spd_systems(self):
        rng = np.random.default_rng(12)
        for M in (2, 4, 8, 16):
            cfg = DcdConfig(H=1., Mb=30, Nu=50 * M)
            for _ in range(50):
                R, b, w = random_system(rng, M)
                sol = dcd_solve(R, b, cfg)
                assert np.max(np.abs(sol.delta_w - w)) <= 4 * 2. ** -30 * M

    def test_fixture_system(self, spd4):
        R, b = spd4
        sol = dcd_solve(R, b, DcdConfig(H=1., Mb=30, Nu=400))
        expected = np.linalg.solve(R, b)
        np.testing.assert_allclose(sol.delta_w, expected, atol=16 * 2. ** -30)

    def test_identity(self):
        sol = dcd_solve(np.eye(2), np.array([0.5, 0.]), DcdConfig(H=1., Mb=16, Nu=32))
        np.testing.assert_array_equal(sol.delta_w, [0.5, 0.])
        np.testing.assert_array_equal(sol.residual, [0., 0.])

    def test_fixture_system_wide_range(self, spd4):
        R, b = spd4
        sol = dcd_solve(R, b, DcdConfig(H=4., Mb=24, Nu=200))
        assert np.max(np.abs(sol.delta_w - np.linalg.solve(R, b))) <= 1e-4

    def test_residual_bookkeeping(self, spd4):
        R, b = spd4
        for Nu in (1, 3, 8, 40):
            sol = dcd_solve(R, b, DcdConfig(Nu=Nu))
            np.testing.assert_allclose(sol.residual, b - R @ sol.delta_w, atol=1e-12)

    def test_scalar_exact(self):
        sol = dcd_solve(np.array([[2.]]), np.array([1.]), DcdConfig(H=2., Mb=30, Nu=10))
        assert sol.delta_w[0] == 0.5
        assert sol.residual[0] == 0.
        assert sol.updates_performed == 1

    def test_no_updates(self, spd4):
        R, b = spd4
        sol = dcd_solve(R, b, DcdConfig(Nu=0))
        assert np.all(sol.delta_w == 0)
        np.testing.assert_array_equal(sol.residual, b)
        assert sol.updates_performed == 0
        assert sol.additions_count == 0

    def test_zero_rhs(self, spd4):
        R, _ = spd4
        cfg = DcdConfig(Mb=16, Nu=8)
        sol = dcd_solve(R, np.zeros(4), cfg)
        assert np.all(sol.delta_w == 0)
        assert sol.updates_performed == 0
        # every bit is tried and discarded
        assert sol.additions_count == cfg.Mb

    def test_steps_are_powers_of_two(self, spd4):
        R, b = spd4
        cfg = DcdConfig(H=1., Mb=12, Nu=30)
        sol = dcd_solve(R, b, cfg)
        # every entry is an integer multiple of the smallest step
        steps = sol.delta_w / cfg.quantum
        np.testing.assert_array_equal(steps, np.round(steps))

    def test_energy_never_increases(self):
        rng = np.random.default_rng(3)
        R, b, _ = random_system(rng, 8)

        def energy(dw):
            return 0.5 * dw @ R @ dw - b @ dw

        previous = 0.
        for Nu in range(1, 40):
            value = energy(dcd_solve(R, b, DcdConfig(Mb=20, Nu=Nu)).delta_w)
            assert value <= previous + 1e-15
            previous = value

    def test_additions_within_bound(self):
        rng = np.random.default_rng(7)
        for M in (1, 3, 8, 16):
            for Nu in (1, 2, 8, 32):
                cfg = DcdConfig(Mb=16, Nu=Nu)
                R, b, _ = random_system(rng, M)
                sol = dcd_solve(R, 10 * b, cfg)
                assert sol.additions_count <= count_ops(cfg, M)
                assert sol.updates_performed <= Nu

    def test_ties_pick_lowest_index(self):
        R = np.eye(3)
        b = np.array([0.5, -0.5, 0.5])
        sol = dcd_solve(R, b, DcdConfig(H=1., Mb=4, Nu=1))
        assert sol.delta_w[0] == 0.5
        assert np.all(sol.delta_w[1:] == 0)

    @pytest.mark.parametrize("R, b", [
        (np.ones((2, 3)), np.ones(2)),
        (np.eye(2), np.ones(3)),
        (np.eye(2), np.array([1., np.nan])),
        (np.array([[1., 0.], [0., np.inf]]), np.ones(2)),
        (np.array([[1., 0.], [0., 0.]]), np.ones(2)),
        (np.array([[1., 0.], [0., -1.]]), np.ones(2)),
    ])
    def test_invalid_system(self, R, b):
        with pytest.raises(UsageError):
            dcd_solve(R, b, DcdConfig())


def test_count_ops():
    assert count_ops(DcdConfig(Mb=16, Nu=8), 128) == 2064
    assert count_ops(DcdConfig(Mb=16, Nu=0), 128) == 16
    assert count_ops(DcdConfig(Mb=1, Nu=1), 1) == 3
    with pytest.raises(UsageError):
        count_ops(DcdConfig(), 0)


def test_complexity():
    cfg = DcdConfig(Mb=16, Nu=8)
    table = complexity(128, cfg, "tapped_delay")
    assert table["dcd"].additions == 2448
    assert table["dcd"].multiplications == 5 * 128 + 2
    assert table["lms"] == Complexity(256, 257, 0)
    assert table["rls"].divisions == 1

    general = complexity(128, cfg, "general")["dcd"]
    assert general.additions == 128 ** 2 + 2 * 128 + 2064
    assert general.divisions == 0

    with pytest.raises(UsageError):
        complexity(128, cfg, "lattice")


if __name__ == "__main__":
    pytest.main([__file__])
