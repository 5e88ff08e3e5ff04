import gzip
import math

import numpy as np
import orjson
import pytest

from sandwich_sde.common.fs import Compression, PathStore, dumps_json

TEST_MESSAGE = {"paths": 10, "seed": 1}


def test_write_read_json(tmp_path):
    store = PathStore(tmp_path / "run")
    written = store.write_json("manifest.json", TEST_MESSAGE)

    assert written.endswith("run/manifest.json")
    assert (tmp_path / "run" / "manifest.json").is_file()
    assert store.read_json("manifest.json") == TEST_MESSAGE


def test_write_creates_parent_directories(tmp_path):
    store = PathStore(tmp_path)
    store.write_text("a/b/path_00000.csv", "t,value\n0,1\n")

    assert (tmp_path / "a" / "b" / "path_00000.csv").read_text() == "t,value\n0,1\n"


def test_gzip_compression(tmp_path):
    store = PathStore(tmp_path, compression=Compression.GZIP)
    written = store.write_json("study.json", TEST_MESSAGE)

    assert written.endswith(".gz")
    with gzip.open(tmp_path / "study.json.gz") as f:
        assert orjson.loads(f.read()) == TEST_MESSAGE
    # compression inferred from the suffix
    assert store.read_json("study.json.gz") == TEST_MESSAGE


def test_memory_filesystem():
    store = PathStore("memory://sandwich/test_fs")
    store.write_text("path.csv", "t,value\n")

    assert store.exists("path.csv")
    assert store.read_text("path.csv") == "t,value\n"
    assert store.base_path.endswith("sandwich/test_fs")


def test_serializer_must_return_bytes(tmp_path):
    store = PathStore(tmp_path)
    with pytest.raises(TypeError):
        store.write("bad.json", TEST_MESSAGE, lambda obj: str(obj))


def test_default_root_from_settings(tmp_path):
    store = PathStore()
    store.write_json("x.json", {})

    assert (tmp_path / "runs" / "x.json").is_file()


def test_absolute_paths_bypass_root(tmp_path):
    store = PathStore(tmp_path / "root")
    target = tmp_path / "elsewhere.txt"
    store.write_text(str(target), "hi")

    assert target.read_text() == "hi"


class TestDumpsJson:
    def test_numpy_arrays(self):
        data = orjson.loads(dumps_json({"values": np.array([1.0, 2.5])}))
        assert data == {"values": [1.0, 2.5]}

    def test_non_finite_become_null(self):
        data = orjson.loads(dumps_json({"a": math.inf, "b": math.nan, "c": 1.0}))
        assert data == {"a": None, "b": None, "c": 1.0}

    def test_sorted_keys(self):
        assert dumps_json({"b": 1, "a": 2}).startswith(b"{\n  \"a\": 2")
