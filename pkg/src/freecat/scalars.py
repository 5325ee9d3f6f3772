"""Scalar accumulators for the compact closed constructions.

A scalar monoid supplies a unit, a commutative multiplication, an involution
and a way to evaluate a freshly formed loop.  ``FreeScalars`` keeps loops
symbolically as multisets; ``PhiScalars`` evaluates them into a prescribed
commutative monoid with involution.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable

from .errors import ScalarMonoidError
from .signature import EMPTY, LoopClass, LoopMultiset, dagger_loop, mset_union


@dataclass(frozen=True)
class Gaussian:
    """Exact Gaussian integer ``re + im*i``."""

    re: int
    im: int = 0

    def __mul__(self, other: Gaussian) -> Gaussian:
        return Gaussian(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    def __add__(self, other: Gaussian) -> Gaussian:
        return Gaussian(self.re + other.re, self.im + other.im)

    def conjugate(self) -> Gaussian:
        return Gaussian(self.re, -self.im)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


class ScalarMonoid:
    name = "abstract"
    unit: Any

    def mul(self, a, b):
        raise NotImplementedError

    def dagger(self, a):
        raise NotImplementedError

    def harvest(self, loop: LoopClass):
        raise NotImplementedError

    def fmt(self, a) -> str:
        return str(a)

    def product(self, items: Iterable) -> Any:
        acc = self.unit
        for x in items:
            acc = self.mul(acc, x)
        return acc

    def self_test(self, samples: list) -> None:
        """Check the commutative-monoid-with-involution laws on ``samples``."""
        u = self.unit
        for a in samples:
            if self.mul(u, a) != a or self.mul(a, u) != a:
                raise ScalarMonoidError(f"{self.name}: unit law fails at {self.fmt(a)}")
            if self.dagger(self.dagger(a)) != a:
                raise ScalarMonoidError(f"{self.name}: involution is not involutive at {self.fmt(a)}")
            for b in samples:
                if self.mul(a, b) != self.mul(b, a):
                    raise ScalarMonoidError(f"{self.name}: not commutative")
                if self.dagger(self.mul(a, b)) != self.mul(self.dagger(a), self.dagger(b)):
                    raise ScalarMonoidError(f"{self.name}: involution is not a homomorphism")
                for c in samples:
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                        raise ScalarMonoidError(f"{self.name}: not associative")


class FreeScalars(ScalarMonoid):
    """Multisets of loop classes under union."""

    name = "free"
    unit = EMPTY

    def mul(self, a: LoopMultiset, b: LoopMultiset) -> LoopMultiset:
        return mset_union(a, b)

    def dagger(self, a: LoopMultiset) -> LoopMultiset:
        if not a:
            return a
        return LoopMultiset.of(dagger_loop(loop) for loop in a)

    def harvest(self, loop: LoopClass) -> LoopMultiset:
        return LoopMultiset.of([loop])


FREE = FreeScalars()


_KINDS = {
    "bool": (True, lambda a, b: a and b, lambda a: a),
    "int": (1, lambda a, b: a * b, lambda a: a),
    "gaussian-int": (Gaussian(1), lambda a, b: a * b, lambda a: a.conjugate()),
}


class PhiScalars(ScalarMonoid):
    """A prescribed monoid (bool, int or Gaussian integers) with loop evaluation ``phi``."""

    def __init__(self, kind: str, phi: Callable[[LoopClass], Any]):
        if kind not in _KINDS:
            raise ScalarMonoidError(f"unknown scalar monoid {kind!r}")
        self.name = kind
        self.unit, self._mul, self._dagger = _KINDS[kind]
        self.phi = phi

    def mul(self, a, b):
        return self._mul(a, b)

    def dagger(self, a):
        return self._dagger(a)

    def harvest(self, loop: LoopClass):
        return self.phi(loop)

    def fmt(self, a) -> str:
        if a is True or a is False:
            return "1" if a else "0"
        return str(a)

    def sample_elements(self) -> list:
        if self.name == "bool":
            return [True, False]
        if self.name == "int":
            return [1, 0, -1, 2, 3]
        return [Gaussian(1), Gaussian(0), Gaussian(0, 1), Gaussian(2, -1), Gaussian(-1, 3)]
