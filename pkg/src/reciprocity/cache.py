"""On-disk coefficient cache.

One file per ``(kind, descriptor, size)``: a versioned header line followed by
``n,value`` CSV rows.  Anything unreadable is treated as a miss and rewritten;
the cache is never trusted over a fresh computation.
"""

from __future__ import annotations

import hashlib
import logging
import random
from pathlib import Path
from typing import Callable, Sequence

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
_HEADER = "# recip-cache v{version} kind={kind} size={size} descriptor={descriptor}"


class CoefficientCache:
    """``kind`` is one of ``eta``, ``theta``, ``trace``.

    With ``verify=True`` every hit is spot-checked: the value is recomputed and
    a random 1% of entries (at least one) must match bit for bit, otherwise
    the fresh data replaces the file.
    """

    KINDS = ("eta", "theta", "trace")

    def __init__(self, directory: str | Path, verify: bool = False, seed: int = 0):
        self.directory = Path(directory)
        self.verify = verify
        self.rng = random.Random(seed)
        self.hits = 0
        self.misses = 0

    def path(self, kind: str, descriptor: str, size: int) -> Path:
        digest = hashlib.sha256(f"{kind}|{descriptor}|{size}".encode()).hexdigest()[:20]
        return self.directory / f"{kind}-{size}-{digest}.csv"

    def get(
        self, kind: str, descriptor: str, size: int, compute: Callable[[], Sequence[int]]
    ) -> list[int]:
        if kind not in self.KINDS:
            raise ValueError(f"unknown cache kind {kind!r}")
        path = self.path(kind, descriptor, size)
        cached = self._read(path, kind, descriptor, size)
        if cached is not None:
            if self.verify:
                fresh = list(compute())
                k = max(1, len(fresh) // 100)
                sample = self.rng.sample(range(len(fresh)), min(k, len(fresh)))
                if len(fresh) != len(cached) or any(fresh[i] != cached[i] for i in sample):
                    log.warning("cache entry %s failed verification; replacing", path.name)
                    self._write(path, kind, descriptor, size, fresh)
                    return fresh
            self.hits += 1
            return cached
        self.misses += 1
        values = list(compute())
        self._write(path, kind, descriptor, size, values)
        return values

    def _read(self, path: Path, kind: str, descriptor: str, size: int) -> list[int] | None:
        if not path.exists():
            return None
        try:
            with path.open() as fh:
                header = fh.readline().rstrip("\n")
                want = _HEADER.format(version=FORMAT_VERSION, kind=kind, size=size, descriptor=descriptor)
                if header != want:
                    raise ValueError("header mismatch")
                values = []
                for i, line in enumerate(fh):
                    n, v = line.rstrip("\n").split(",")
                    if int(n) != i:
                        raise ValueError(f"row {i} labelled {n}")
                    values.append(int(v))
            return values
        except (OSError, ValueError) as err:
            log.warning("ignoring unreadable cache file %s (%s)", path, err)
            return None

    def _write(self, path: Path, kind: str, descriptor: str, size: int, values: Sequence[int]) -> None:
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            with tmp.open("w") as fh:
                fh.write(_HEADER.format(version=FORMAT_VERSION, kind=kind, size=size, descriptor=descriptor))
                fh.write("\n")
                fh.writelines(f"{i},{v}\n" for i, v in enumerate(values))
            tmp.replace(path)
        except OSError as err:
            log.warning("could not write cache file %s (%s)", path, err)
