import os.path as osp

import numpy as np
import pytest

from dcdrls import util
from dcdrls.exc import UsageError

here = osp.realpath(osp.dirname(__file__))


def test_package_root():
    assert util.package_root() == osp.realpath(osp.join(here, ".."))


def test_data_path():
    assert util.data_path() == osp.realpath(osp.join(here, "data"))


def test_config_path():
    assert osp.isdir(util.config_path())
    assert osp.isfile(util.config_path("mcc_sparse.ini"))


def test_absjoin():
    assert util.absjoin(here, "..", "tests") == here


def test_as_vector():
    np.testing.assert_array_equal(util.as_vector("x", [1, 2]), [1., 2.])
    with pytest.raises(UsageError):
        util.as_vector("x", [[1., 2.]])
    with pytest.raises(UsageError):
        util.as_vector("x", [1., 2.], size=3)
    with pytest.raises(UsageError) as info:
        util.as_vector("x", [1., np.inf])
    assert "x" in str(info.value)


def test_as_scalar():
    assert util.as_scalar("d", 3) == 3.
    with pytest.raises(UsageError):
        util.as_scalar("d", float("nan"))


if __name__ == "__main__":
    pytest.main([__file__])
