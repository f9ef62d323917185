"""On-disk histogram cache.

Layout: one text file per format version inside the cache directory::

    <cache_dir>/height-histogram.v1.txt

    # maninbench-height-histogram v1 bound=<B>
    1 24
    2 200
    ...

Records are ``n h(n)`` for ``n = 1..B``, unix newlines, so the file is
bit-exact reproducible. A cache holding bound ``B0`` serves any request
``B <= B0`` and is extended in place for larger requests.
"""

from __future__ import annotations

import hashlib
import os
import re
from pathlib import Path
from typing import Optional, Sequence

FORMAT_ID = "maninbench-height-histogram"
FORMAT_VERSION = 1
_HEADER = re.compile(rf"^# {FORMAT_ID} v(\d+) bound=(\d+)$")


class CacheFormatError(ValueError):
    pass


def cache_path(cache_dir) -> Path:
    return Path(cache_dir) / f"height-histogram.v{FORMAT_VERSION}.txt"


def write_histogram(path, counts: Sequence[int]) -> None:
    """Write ``counts`` (indexed from 0, ``counts[0]`` ignored) atomically."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    bound = len(counts) - 1
    lines = [f"# {FORMAT_ID} v{FORMAT_VERSION} bound={bound}"]
    lines += [f"{n} {int(counts[n])}" for n in range(1, bound + 1)]
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_histogram(path) -> Optional[list]:
    """Return ``[0, h(1), ..., h(B)]`` or ``None`` if the file is absent."""
    path = Path(path)
    if not path.exists():
        return None
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        m = _HEADER.match(header)
        if not m:
            raise CacheFormatError(f"{path}: bad header {header!r}")
        version, bound = int(m.group(1)), int(m.group(2))
        if version != FORMAT_VERSION:
            return None  # stale format: caller recomputes
        counts = [0]
        for expected, line in enumerate(fh, start=1):
            n, h = line.split()
            if int(n) != expected:
                raise CacheFormatError(f"{path}: record {expected} labelled {n}")
            counts.append(int(h))
    if len(counts) - 1 != bound:
        raise CacheFormatError(f"{path}: header says bound={bound}, found {len(counts) - 1} records")
    return counts


def fingerprint(path) -> Optional[str]:
    path = Path(path)
    if not path.exists():
        return None
    return hashlib.sha256(path.read_bytes()).hexdigest()
