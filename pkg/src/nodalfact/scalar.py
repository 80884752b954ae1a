"""Exact scalar fields: the rationals and prime fields F_p.

A :class:`Field` knows how to canonicalize, combine and serialize *raw*
values.  Raw values are plain Python objects (``Fraction`` for Q, ``int`` in
``[0, p)`` for F_p) so that the linear-algebra layer can work on them without
wrapper overhead.  :class:`ExactScalar` pairs a raw value with its field and
gives operator syntax plus field-mismatch checking for user-facing code.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DEFAULT_PRIME = 65521


class FieldMismatch(ValueError):
    """Raised when scalars from different fields are combined."""


class DivisionByZero(ZeroDivisionError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Base class for the two supported exact fields."""

    kind: str
    p: int | None = None

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def is_zero(self, a) -> bool:
        return a == 0

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e: int):
        raise NotImplementedError

    def random(self, rng: np.random.Generator):
        raise NotImplementedError

    def random_nonzero(self, rng: np.random.Generator):
        while True:
            a = self.random(rng)
            if not self.is_zero(a):
                return a

    def to_str(self, a) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    @property
    def spec(self) -> str:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"Field({self.spec!r})"


class RationalField(Field):
    kind = "qq"
    # bound for the numerator/denominator of random rationals
    random_bound = 50

    def __call__(self, x):
        if isinstance(x, float):
            raise TypeError("floats are not exact scalars")
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero in Q")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by zero in Q")
        return a / b

    def power(self, a, e):
        return a**e

    def random(self, rng):
        b = self.random_bound
        num = int(rng.integers(-b, b + 1))
        den = int(rng.integers(1, b + 1))
        return Fraction(num, den)

    def to_str(self, a):
        return str(a)

    def parse(self, text):
        return Fraction(str(text).strip())

    @property
    def spec(self):
        return "qq"


class PrimeField(Field):
    kind = "fp"

    def __init__(self, p: int):
        if not (2 < p < 2**31) or not is_prime(p):
            raise ValueError(f"modulus must be an odd prime below 2^31, got {p}")
        self.p = p

    def __call__(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise DivisionByZero(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, (float, np.floating)):
            raise TypeError("floats are not exact scalars")
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero(f"inverse of zero in F_{self.p}")
        return pow(a, -1, self.p)

    def power(self, a, e):
        return pow(a, e, self.p)

    def random(self, rng):
        return int(rng.integers(0, self.p))

    def to_str(self, a):
        return str(int(a))

    def parse(self, text):
        text = str(text).strip()
        if "/" in text:
            return self(Fraction(text))
        return int(text) % self.p

    @property
    def spec(self):
        return f"fp:{self.p}"


QQ = RationalField()


@functools.lru_cache(maxsize=None)
def _prime_field(p: int) -> PrimeField:
    return PrimeField(p)


def GF(p: int = DEFAULT_PRIME) -> PrimeField:
    return _prime_field(int(p))


def field_from_spec(spec: str) -> Field:
    """Parse ``"qq"`` or ``"fp:<p>"``."""
    spec = spec.strip().lower()
    if spec in ("qq", "q"):
        return QQ
    if spec.startswith("fp:"):
        return GF(int(spec[3:]))
    raise ValueError(f"unknown field spec {spec!r}")


@dataclass(frozen=True)
class ExactScalar:
    """A field element in canonical form; arithmetic is exact."""

    field: Field
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.field(self.value))

    def _coerce(self, other) -> object:
        if isinstance(other, ExactScalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field.spec} vs {other.field.spec}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def _wrap(self, v) -> ExactScalar:
        return ExactScalar(self.field, v)

    def __add__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(b, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e: int):
        if e < 0:
            return self._wrap(self.field.power(self.field.inv(self.value), -e))
        return self._wrap(self.field.power(self.value, e))

    def inverse(self) -> ExactScalar:
        return self._wrap(self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __eq__(self, other):
        if isinstance(other, ExactScalar):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.spec, self.value))

    def __str__(self):
        return self.field.to_str(self.value)

    def __repr__(self):
        return f"ExactScalar({self.field.spec}, {self})"

    @classmethod
    def parse(cls, field: Field, text: str) -> ExactScalar:
        return cls(field, field.parse(text))


def arith(a: ExactScalar, b: ExactScalar, op: str) -> ExactScalar:
    """Apply ``op`` in {"add", "sub", "mul", "div"} to two scalars of one field."""
    if a.field != b.field:
        raise FieldMismatch(f"{a.field.spec} vs {b.field.spec}")
    ops = {"add": a.field.add, "sub": a.field.sub, "mul": a.field.mul, "div": a.field.div}
    try:
        fn = ops[op]
    except KeyError:
        raise ValueError(f"unknown op {op!r}") from None
    return ExactScalar(a.field, fn(a.value, b.value))


def random_scalar(field: Field, rng: np.random.Generator) -> ExactScalar:
    return ExactScalar(field, field.random(rng))


def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(seed)
