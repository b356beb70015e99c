import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

from synthdg.errors import IndexOutOfRange, SynthDGError


@dataclass(frozen=True)
class Permutation:
    """
    Permutation of {1..n}; images[j - 1] is the image of j.
    """

    images: Tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise SynthDGError(f"{list(self.images)} is not a permutation of 1..{len(self.images)}")

    @staticmethod
    def create(images: Sequence[int]) -> "Permutation":
        return Permutation(tuple(int(i) for i in images))

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def transposition(n: int, i: int, j: int) -> "Permutation":
        for index in (i, j):
            if not 1 <= index <= n:
                raise IndexOutOfRange(index, 1, n)
        images = list(range(1, n + 1))
        images[i - 1], images[j - 1] = j, i
        return Permutation(tuple(images))

    @staticmethod
    def all(n: int) -> Iterator["Permutation"]:
        for images in itertools.permutations(range(1, n + 1)):
            yield Permutation(images)

    @staticmethod
    def transpositions(n: int) -> Iterator["Permutation"]:
        for i, j in itertools.combinations(range(1, n + 1), 2):
            yield Permutation.transposition(n, i, j)

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        if not 1 <= j <= self.size:
            raise IndexOutOfRange(j, 1, self.size)
        return self.images[j - 1]

    def inverse(self) -> "Permutation":
        images = [0] * self.size
        for j, image in enumerate(self.images, start=1):
            images[image - 1] = j
        return Permutation(tuple(images))

    def compose(self, other: "Permutation") -> "Permutation":
        """self . other"""
        if other.size != self.size:
            raise SynthDGError(f"Cannot compose permutations of {self.size} and {other.size}")
        return Permutation(tuple(self(other(j)) for j in range(1, self.size + 1)))

    @property
    def sign(self) -> int:
        inversions = sum(
            1
            for a, b in itertools.combinations(range(self.size), 2)
            if self.images[a] > self.images[b]
        )
        return -1 if inversions % 2 else 1

    def __str__(self) -> str:
        return "(" + " ".join(str(i) for i in self.images) + ")"
