from typing import Any, Callable, Optional
from enum import Enum
import gzip
import os

import orjson
from fsspec import url_to_fs, AbstractFileSystem

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_SORT_KEYS


class Compression(str, Enum):
    NONE = "none"
    GZIP = "gzip"


def dumps_json(obj: Any) -> bytes:
    """Serialize run artifacts; dataclasses and numpy arrays are handled natively, inf/nan become null."""
    return orjson.dumps(obj, option=JSON_OPTIONS)


class PathStore:
    """
    Interface for writing run artifacts to any fsspec-compatible file system.

    Relative paths resolve against the store root, parent directories are created on
    write and files can optionally be gzip compressed.

    Core Methods:
        - write(): Serialize and write data to a file.
        - read(): Read and deserialize data from a file.

    Convenience Methods:
        - write_json() / read_json(): Work with JSON documents.
        - write_text() / read_text(): Work with UTF-8 text (CSV paths).

    Example:
        store = PathStore("memory://runs/sim1")
        store.write_json("manifest.json", {"paths": 10})
        manifest = store.read_json("manifest.json")
    """

    def __init__(self, storage_url: Optional[str] = None, compression: Compression = Compression.NONE):
        """
        Args:
            storage_url: URL or local directory of the store root. Defaults to
                ``settings.output_url``.
            compression: Compression applied when writing. Defaults to none.

        Raises:
            ValueError: If the storage URL cannot be parsed by `fsspec.url_to_fs`.
        """
        if storage_url is None:
            from sandwich_sde.common.config import settings

            storage_url = settings.output_url
        fs, root = url_to_fs(os.fspath(storage_url))
        self._fs: AbstractFileSystem = fs
        self._root: str = root.rstrip("/") or "/"
        self._compression = Compression(compression)

    @property
    def base_path(self) -> str:
        return self._root

    @property
    def fs(self) -> AbstractFileSystem:
        return self._fs

    def resolve(self, path: str) -> str:
        return path if not _is_relative(path) else f"{self._root.rstrip('/')}/{path.lstrip('/')}"

    # Core generic API
    def write(self, path: str, obj: Any, serializer: Callable[[Any], bytes], mkdirs: bool = True) -> str:
        """
        Serialize ``obj`` and write it to ``path``.

        Args:
            path: Destination path, relative to the store root unless absolute.
            obj: The object to serialize.
            serializer: Function returning the bytes to write.
            mkdirs: Whether to create missing parent directories.

        Returns:
            The resolved path actually written (``.gz`` appended when compressing).

        Raises:
            TypeError: If the serializer does not return bytes.
        """
        path = self.resolve(path)
        data = serializer(obj)
        if not isinstance(data, (bytes, bytearray)):
            raise TypeError("serializer must return bytes")

        if self._compression == Compression.GZIP:
            data = gzip.compress(data, mtime=0)
            path = path.rstrip("/") + ".gz"

        if mkdirs and "/" in path:
            self._fs.makedirs(path.rsplit("/", 1)[0], exist_ok=True)

        with self._fs.open(path, "wb") as f:
            f.write(data)
        return path

    def read(self, path: str, deserializer: Callable[[bytes], Any], compression: Optional[str] = "infer") -> Any:
        """
        Read ``path`` and deserialize its bytes.

        Args:
            path: Path to read, relative to the store root unless absolute.
            deserializer: Function turning the raw bytes into an object.
            compression: fsspec compression mode. Defaults to "infer".
        """
        path = self.resolve(path)
        with self._fs.open(path, "rb", compression=compression) as f:
            data = f.read()
        return deserializer(data)

    def exists(self, path: str) -> bool:
        return self._fs.exists(self.resolve(path))

    def write_json(self, path: str, obj: Any, mkdirs: bool = True) -> str:
        return self.write(path, obj, dumps_json, mkdirs)

    def read_json(self, path: str) -> Any:
        return self.read(path, orjson.loads)

    def write_text(self, path: str, text: str, mkdirs: bool = True) -> str:
        return self.write(path, text, lambda s: s.encode("utf-8"), mkdirs)

    def read_text(self, path: str) -> str:
        return self.read(path, lambda b: b.decode("utf-8"))


def _is_relative(path: str) -> bool:
    return "://" not in path and not path.startswith("/")
