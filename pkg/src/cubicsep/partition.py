"""Range partitioning and deterministic fan-out for the exhaustive scans."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class Partition:
    """Slice ``index`` of ``count`` round-robin slices of an enumerated range."""

    index: int = 0
    count: int = 1

    def __post_init__(self):
        if self.count < 1 or not 0 <= self.index < self.count:
            raise ValueError(f"bad partition {self.index}/{self.count}")

    def select(self, items: Iterable[T]) -> Iterable[T]:
        for i, item in enumerate(items):
            if i % self.count == self.index:
                yield item

    @classmethod
    def all(cls, count: int) -> list["Partition"]:
        return [cls(i, count) for i in range(count)]

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"i/n"``."""
        i, n = text.split("/")
        return cls(int(i), int(n))


def run_partitioned(
    func: Callable[..., R],
    args: Sequence,
    parts: int,
    merge: Callable[[list[R]], R],
    workers: int = 1,
) -> R:
    """Evaluate ``func(*args, partition)`` on every slice and merge in slice order."""
    partitions = Partition.all(parts)
    if workers <= 1 or parts == 1:
        results = [func(*args, p) for p in partitions]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(func, *args, p) for p in partitions]
            results = [f.result() for f in futures]
    return merge(results)
