"""
Permutations on the points 1..n.

Composition is LEFT-TO-RIGHT: ``(a * b)(i) == b(a(i))``, i.e. apply ``a`` first.
With this convention conjugation ``a.conjugate(g) == g**-1 * a * g`` is the
usual exponent notation a^g, and (a^g)^h == a^(g*h).
Never mix in right-to-left products.
"""
import math
import re
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from src.core.errors import PermutationError

_CYCLE_RE = re.compile(r"\(\s*(\d+(?:\s+\d+)*)?\s*\)")


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of {1..degree}; images[i-1] is the image of point i.

    Ordering is lexicographic on the image sequence, which is the
    deterministic element order used everywhere else.
    """
    images: Tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if n < 1:
            raise PermutationError("degree must be positive")
        if sorted(self.images) != list(range(1, n + 1)):
            raise PermutationError(f"not a bijection of 1..{n}: {self.images}")

    # --- construction ---

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise PermutationError("degree must be positive")
        return cls(tuple(range(1, degree + 1)))

    @classmethod
    def from_images(cls, images: Iterable[int]) -> "Permutation":
        return cls(tuple(int(i) for i in images))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], degree: int) -> "Permutation":
        if degree < 1:
            raise PermutationError("degree must be positive")
        images = list(range(1, degree + 1))
        seen = set()
        for cycle in cycles:
            for point in cycle:
                if not 1 <= point <= degree:
                    raise PermutationError(f"point {point} outside 1..{degree}")
                if point in seen:
                    raise PermutationError(f"point {point} repeated")
                seen.add(point)
            for a, b in zip(cycle, list(cycle[1:]) + list(cycle[:1])):
                images[a - 1] = b
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str, degree: int) -> "Permutation":
        """
        Parse disjoint cycles such as "(1 2 3)(4 5)". Empty text and "()" are
        the identity; points not mentioned are fixed.
        """
        if degree < 1:
            raise PermutationError("degree must be positive")
        cycles: List[List[int]] = []
        stripped = text.strip()
        pos = 0
        while pos < len(stripped):
            if stripped[pos].isspace():
                pos += 1
                continue
            match = _CYCLE_RE.match(stripped, pos)
            if not match:
                raise PermutationError(f"malformed cycle notation at position {pos} in {text!r}")
            body = match.group(1)
            if body:
                cycles.append([int(token) for token in body.split()])
            pos = match.end()
        return cls.from_cycles(cycles, degree)

    # --- algebra ---

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def _check_degree(self, other: "Permutation"):
        if not isinstance(other, Permutation):
            raise TypeError(f"expected a Permutation, got {type(other).__name__}")
        if other.degree != self.degree:
            raise PermutationError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __mul__(self, other: "Permutation") -> "Permutation":
        self._check_degree(other)
        b = other.images
        return Permutation(tuple(b[i - 1] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, image in enumerate(self.images, start=1):
            inv[image - 1] = i
        return Permutation(tuple(inv))

    def __pow__(self, exponent: int) -> "Permutation":
        base = self if exponent >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def conjugate(self, g: "Permutation") -> "Permutation":
        """Return a^g = g^-1 * a * g."""
        self._check_degree(g)
        return g.inverse() * self * g

    def commutator(self, other: "Permutation") -> "Permutation":
        """[a, b] = a^-1 b^-1 a b."""
        self._check_degree(other)
        return self.inverse() * other.inverse() * self * other

    # --- structure ---

    @property
    def is_identity(self) -> bool:
        return all(image == i for i, image in enumerate(self.images, start=1))

    def moved_points(self) -> List[int]:
        return [i for i, image in enumerate(self.images, start=1) if image != i]

    def cycles(self) -> List[Tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point, sorted."""
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen or self(start) == start:
                continue
            cycle = [start]
            seen.add(start)
            point = self(start)
            while point != start:
                cycle.append(point)
                seen.add(point)
                point = self(point)
            out.append(tuple(cycle))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if not self.is_identity else 1

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def __repr__(self) -> str:
        return f"Permutation({self}, degree={self.degree})"

    def extend(self, degree: int, offset: int = 0) -> "Permutation":
        """Embed into a larger degree, shifting every point by `offset`."""
        if offset + self.degree > degree:
            raise PermutationError(f"cannot embed degree {self.degree} at offset {offset} into {degree}")
        images = list(range(1, degree + 1))
        for i, image in enumerate(self.images, start=1):
            images[offset + i - 1] = offset + image
        return Permutation(tuple(images))
