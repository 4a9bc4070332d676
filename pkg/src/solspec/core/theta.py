"""Points of the parameter space Ω_p.

A :class:`ThetaSequence` is fixed by ``theta0`` and an eventually periodic digit
stream. Level ``n`` is ``θ_n = (θ_{n-1} + digit_n) / p``, so ``p·θ_n ≡ θ_{n-1}``
modulo 1 and every ``θ_n`` is an exact rational in ``[0, 1)``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from solspec.core.padic import validate_prime
from solspec.errors import DomainError


@dataclass(frozen=True, slots=True)
class ThetaSequence:
    """An element θ = (θ_n) of Ω_p.

    Attributes:
        theta0: Exact rational in ``[0, 1)``.
        preperiod: Digits used for levels ``1..len(preperiod)``.
        period: Digits repeated afterwards; an empty period means all zeros.
        prime: The prime p.
    """

    theta0: Fraction
    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    prime: int
    _levels: list[Fraction] = field(default_factory=list, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        validate_prime(self.prime)
        theta0 = Fraction(self.theta0)
        if not 0 <= theta0 < 1:
            raise DomainError(f"theta0 must lie in [0, 1), got {theta0}")
        preperiod = tuple(int(d) for d in self.preperiod)
        period = tuple(int(d) for d in self.period) or (0,)
        for digit in preperiod + period:
            if not 0 <= digit < self.prime:
                raise DomainError(f"digit {digit} outside 0..{self.prime - 1}")
        object.__setattr__(self, "theta0", theta0)
        object.__setattr__(self, "preperiod", preperiod)
        object.__setattr__(self, "period", period)
        self._levels.append(theta0)

    @classmethod
    def trivial(cls, prime: int) -> ThetaSequence:
        """The zero sequence; its multiplier is identically 1."""
        return cls(Fraction(0), (), (0,), prime)

    @classmethod
    def periodic_two_thirds(cls) -> ThetaSequence:
        """θ = (2/3, 1/3, 2/3, ...) for p = 2."""
        return cls(Fraction(2, 3), (), (0, 1), 2)

    @classmethod
    def rational_rotation(cls, a: int, q: int, prime: int) -> ThetaSequence:
        """θ_n = a / (p**n · q) with all digits zero, for ``0 <= a < q``."""
        if q <= 0 or not 0 <= a < q:
            raise DomainError(f"need 0 <= a < q, got a={a}, q={q}")
        return cls(Fraction(a, q), (), (0,), prime)

    def digit(self, n: int) -> int:
        """Digit used to pass from level ``n - 1`` to level ``n`` (``n >= 1``)."""
        if n < 1:
            raise DomainError(f"digits are indexed from 1, got {n}")
        index = n - 1
        if index < len(self.preperiod):
            return self.preperiod[index]
        return self.period[(index - len(self.preperiod)) % len(self.period)]

    def theta_at(self, n: int) -> Fraction:
        """Return θ_n exactly; levels are memoized."""
        if n < 0:
            raise DomainError(f"level must be nonnegative, got {n}")
        levels = self._levels
        if n < len(levels):
            return levels[n]
        with self._lock:
            while len(levels) <= n:
                k = len(levels)
                levels.append((levels[k - 1] + self.digit(k)) / self.prime)
            return levels[n]

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.prime,
            "theta0": str(self.theta0),
            "preperiod": list(self.preperiod),
            "period": list(self.period),
        }


def theta_at(theta: ThetaSequence, n: int) -> Fraction:
    """Functional form of :meth:`ThetaSequence.theta_at`."""
    return theta.theta_at(n)


__all__ = ["ThetaSequence", "theta_at"]
