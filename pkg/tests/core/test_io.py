import numpy as np
import pytest

from sandwich_sde.common.errors import PathFormatError
from sandwich_sde.core import RngStream, SamplePath, TimeGrid, format_path_csv, read_path_csv, write_path_csv
from sandwich_sde.core.io import parse_path_csv
from sandwich_sde.noise import NoiseSpec, sample_noise


def test_format_small_path():
    path = SamplePath(TimeGrid(1.0, 2), [1.0, 2.0, 3.0])
    assert format_path_csv(path) == "t,value\n0,1\n0.5,2\n1,3\n"


def test_fbm_path_survives_file(tmp_path):
    path = sample_noise(NoiseSpec("fbm", hurst=0.7), TimeGrid(1.0, 1000), RngStream(3, 0))
    target = tmp_path / "noise.csv"
    write_path_csv(path, target)

    back = read_path_csv(target)
    assert back == path
    np.testing.assert_array_equal(back.values, path.values)


def test_memory_url():
    path = SamplePath(TimeGrid(2.0, 4), [0.0, -1.5, 2.25, 1e-300, 7.0])
    write_path_csv(path, "memory://io/path.csv")
    assert read_path_csv("memory://io/path.csv") == path


class TestParseErrors:
    def test_decreasing_time(self):
        with pytest.raises(PathFormatError) as excinfo:
            parse_path_csv("t,value\n0,1\n0.5,2\n0.4,3\n")
        assert excinfo.value.line == 4

    def test_bad_header(self):
        with pytest.raises(PathFormatError, match="header"):
            parse_path_csv("time,y\n0,1\n1,2\n")

    def test_wrong_field_count(self):
        with pytest.raises(PathFormatError, match="2 fields"):
            parse_path_csv("t,value\n0,1,2\n1,2\n")

    def test_unparseable(self):
        with pytest.raises(PathFormatError, match="unparseable"):
            parse_path_csv("t,value\n0,one\n1,2\n")

    def test_non_finite(self):
        with pytest.raises(PathFormatError, match="non-finite"):
            parse_path_csv("t,value\n0,1\n1,nan\n")

    def test_non_uniform(self):
        with pytest.raises(PathFormatError, match="uniform grid"):
            parse_path_csv("t,value\n0,1\n0.3,2\n1,3\n")

    def test_must_start_at_zero(self):
        with pytest.raises(PathFormatError, match="start at 0"):
            parse_path_csv("t,value\n0.5,1\n1,2\n")
