"""Exact coefficient rings: the integers, the rationals, and prime fields.

Elements are plain Python objects (``int`` for Z and F_p, ``Fraction`` for Q);
the :class:`Ring` value carries the arithmetic.  Everything is exact — no
floating point anywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class RingError(ValueError):
    """Raised for malformed ring specifications or element coercions."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Ring:
    """One of Z, Q, or F_p (p prime).

    ``name`` is ``"Z"``, ``"Q"`` or ``"Fp"``; for prime fields ``p`` holds the
    characteristic.  Rings compare by value, so they are safe dict keys.
    """

    name: str
    p: int | None = None

    def __post_init__(self):
        if self.name not in ("Z", "Q", "Fp"):
            raise RingError(f"unknown ring {self.name!r}")
        if self.name == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise RingError(f"F_p requires a prime p, got {self.p!r}")
        elif self.p is not None:
            raise RingError(f"ring {self.name} takes no characteristic")

    # -- basic structure ---------------------------------------------------

    @property
    def is_field(self) -> bool:
        return self.name != "Z"

    @property
    def zero(self):
        return Fraction(0) if self.name == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.name == "Q" else 1

    def el(self, value):
        """Coerce ``value`` (int, Fraction, or string) into this ring."""
        if isinstance(value, str):
            value = value.strip()
            if self.name == "Q":
                value = Fraction(value)
            else:
                value = int(value)
        if self.name == "Z":
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise RingError(f"{value} is not an integer")
                value = value.numerator
            return int(value)
        if self.name == "Q":
            return Fraction(value)
        # F_p
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise RingError(f"{value} has no image in F_{self.p}")
            return value.numerator * pow(value.denominator, self.p - 2, self.p) % self.p
        return int(value) % self.p

    # -- arithmetic ---------------------------------------------------------

    def add(self, a, b):
        return (a + b) % self.p if self.name == "Fp" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.name == "Fp" else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.name == "Fp" else a * b

    def neg(self, a):
        return (-a) % self.p if self.name == "Fp" else -a

    def inv(self, a):
        """Multiplicative inverse; only available over fields."""
        if self.name == "Q":
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return Fraction(1) / a
        if self.name == "Fp":
            if a % self.p == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(a, self.p - 2, self.p)
        raise RingError("Z is not a field")

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0 if self.name != "Fp" else a % self.p == 0

    # -- serialization -------------------------------------------------------

    def to_str(self, a) -> str:
        if self.name == "Q":
            f = Fraction(a)
            return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
        return str(a)

    def tag(self) -> str:
        return f"F{self.p}" if self.name == "Fp" else self.name

    def __str__(self):
        return self.tag()


ZZ = Ring("Z")
QQ = Ring("Q")


def GF(p: int) -> Ring:
    return Ring("Fp", p)


def parse_ring(tag: str) -> Ring:
    """Parse ``"Z"``, ``"Q"`` or ``"F<p>"`` into a :class:`Ring`."""
    tag = tag.strip()
    if tag == "Z":
        return ZZ
    if tag == "Q":
        return QQ
    if tag.startswith("F"):
        try:
            p = int(tag[1:])
        except ValueError:
            raise RingError(f"bad ring tag {tag!r}") from None
        return GF(p)
    raise RingError(f"bad ring tag {tag!r}")
