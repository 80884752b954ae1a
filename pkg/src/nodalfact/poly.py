"""Homogeneous forms over an exact field.

A form is a sparse map from exponent tuples to nonzero raw coefficients.
Dense coefficient vectors use the order of :func:`monomial_basis`
(graded lexicographic, ``x0^d`` first), which is also the column order of
evaluation matrices.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, EqualPoints, FieldTooLarge, ParseError, ZeroForm
from .geom import ProjectivePoint, Projection
from .scalar import ExactScalar, Field, field_from_spec


def _exponents(nvars: int, d: int):
    if nvars == 1:
        yield (d,)
        return
    for e in range(d, -1, -1):
        for rest in _exponents(nvars - 1, d - e):
            yield (e,) + rest


@functools.lru_cache(maxsize=None)
def monomial_basis(N: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All degree-d monomials in x0..xN, graded-lex order (x0^d first)."""
    if N < 0 or d < 0:
        raise ValueError("need N >= 0 and d >= 0")
    return tuple(_exponents(N + 1, d))


@functools.lru_cache(maxsize=None)
def monomial_index(N: int, d: int) -> dict[tuple[int, ...], int]:
    return {e: i for i, e in enumerate(monomial_basis(N, d))}


def monomial_count(N: int, d: int) -> int:
    return comb(d + N, N)


def grlex_key(exp: Sequence[int]):
    """Sort key realizing graded-lex order (larger monomials sort first)."""
    return (-sum(exp), tuple(-e for e in exp))


@dataclass(frozen=True)
class HomogeneousForm:
    field: Field
    ambient_dim: int
    degree: int
    coeffs: dict

    def __post_init__(self):
        F = self.field
        clean = {}
        for exp, c in self.coeffs.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.ambient_dim + 1 or sum(exp) != self.degree or min(exp) < 0:
                raise ValueError(f"monomial {exp} is not of degree {self.degree} in "
                                 f"{self.ambient_dim + 1} variables")
            c = F(c)
            if not F.is_zero(c):
                clean[exp] = c
        object.__setattr__(self, "coeffs", clean)

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, field: Field, N: int, d: int) -> HomogeneousForm:
        return cls(field, N, d, {})

    @classmethod
    def linear(cls, field: Field, coeffs: Sequence) -> HomogeneousForm:
        N = len(coeffs) - 1
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * (N + 1)
            e[i] = 1
            terms[tuple(e)] = c
        return cls(field, N, 1, terms)

    @classmethod
    def variable(cls, field: Field, N: int, i: int) -> HomogeneousForm:
        return cls.linear(field, [1 if j == i else 0 for j in range(N + 1)])

    @classmethod
    def constant(cls, field: Field, N: int, c=1) -> HomogeneousForm:
        return cls(field, N, 0, {(0,) * (N + 1): c})

    @classmethod
    def from_dense(cls, field: Field, N: int, d: int, vec: Sequence) -> HomogeneousForm:
        basis = monomial_basis(N, d)
        if len(vec) != len(basis):
            raise ValueError("dense vector has the wrong length")
        return cls(field, N, d, dict(zip(basis, vec)))

    def to_dense(self) -> list:
        F = self.field
        return [self.coeffs.get(e, F.zero) for e in monomial_basis(self.ambient_dim, self.degree)]

    # arithmetic ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: HomogeneousForm):
        if other.field != self.field or other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("forms live on different spaces")

    def __add__(self, other: HomogeneousForm) -> HomogeneousForm:
        self._check(other)
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degrees")
        F = self.field
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = F.add(out.get(e, F.zero), c)
        return HomogeneousForm(F, self.ambient_dim, self.degree, out)

    def __neg__(self) -> HomogeneousForm:
        F = self.field
        return HomogeneousForm(F, self.ambient_dim, self.degree,
                               {e: F.neg(c) for e, c in self.coeffs.items()})

    def __sub__(self, other: HomogeneousForm) -> HomogeneousForm:
        return self + (-other)

    def scale(self, c) -> HomogeneousForm:
        F = self.field
        if isinstance(c, ExactScalar):
            c = c.value
        c = F(c)
        return HomogeneousForm(F, self.ambient_dim, self.degree,
                               {e: F.mul(c, v) for e, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, HomogeneousForm):
            return self.scale(other)
        self._check(other)
        F = self.field
        out: dict = {}
        if F.kind == "fp":
            p = F.p
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = (out.get(e, 0) + c1 * c2) % p
        else:
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out.get(e, 0) + c1 * c2
        return HomogeneousForm(F, self.ambient_dim, self.degree + other.degree, out)

    __rmul__ = scale

    def __pow__(self, k: int) -> HomogeneousForm:
        result = HomogeneousForm.constant(self.field, self.ambient_dim)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        return (isinstance(other, HomogeneousForm) and self.field == other.field
                and self.ambient_dim == other.ambient_dim and self.degree == other.degree
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.degree, frozenset(self.coeffs.items())))

    # evaluation ---------------------------------------------------------

    def value_at(self, pt: ProjectivePoint):
        """Raw value at the normalized representative of ``pt``."""
        if pt.ambient_dim != self.ambient_dim:
            raise DimensionMismatch(f"form on P^{self.ambient_dim}, point in P^{pt.ambient_dim}")
        return self.value_at_coords(pt.coords)

    def value_at_coords(self, coords: Sequence):
        F = self.field
        if F.kind == "fp":
            p = F.p
            acc = 0
            for e, c in self.coeffs.items():
                t = c
                for x, k in zip(coords, e):
                    if k:
                        t = t * pow(x, k, p) % p
                acc += t
            return acc % p
        acc = F.zero
        for e, c in self.coeffs.items():
            t = c
            for x, k in zip(coords, e):
                if k:
                    t *= x**k
            acc += t
        return acc

    def __call__(self, pt: ProjectivePoint):
        return self.value_at(pt)

    def vanishes_at(self, pt: ProjectivePoint) -> bool:
        return self.field.is_zero(self.value_at(pt))

    def partial(self, i: int) -> HomogeneousForm:
        F = self.field
        if self.degree == 0:
            return HomogeneousForm.zero(F, self.ambient_dim, 0)
        out = {}
        for e, c in self.coeffs.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = F.mul(F(e[i]), c)
        return HomogeneousForm(F, self.ambient_dim, self.degree - 1, out)

    def __str__(self):
        if not self.coeffs:
            return "0"
        out = ""
        for e in sorted(self.coeffs, key=grlex_key):
            c = self.field.to_str(self.coeffs[e])
            sign = " + "
            if c.startswith("-"):
                sign, c = " - ", c[1:]
            mono = "*".join(f"x{i}" if k == 1 else f"x{i}^{k}" for i, k in enumerate(e) if k)
            term = f"{c}*{mono}" if mono else c
            if out:
                out += sign + term
            else:
                out = ("-" if sign == " - " else "") + term
        return out

    def to_json(self) -> dict:
        F = self.field
        return {
            "field": F.spec,
            "dim": self.ambient_dim,
            "degree": self.degree,
            "terms": [{"exp": list(e), "coeff": F.to_str(self.coeffs[e])}
                      for e in sorted(self.coeffs, key=grlex_key)],
        }

    @classmethod
    def from_json(cls, data: dict, field: Field | None = None) -> HomogeneousForm:
        try:
            if field is None:
                field = field_from_spec(data["field"])
            terms = {tuple(t["exp"]): field.parse(t["coeff"]) for t in data["terms"]}
            return cls(field, int(data["dim"]), int(data["degree"]), terms)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed form: {exc}") from exc


def evaluate(form: HomogeneousForm, pt: ProjectivePoint) -> ExactScalar:
    return ExactScalar(form.field, form.value_at(pt))


def partial_derivatives(form: HomogeneousForm) -> list[HomogeneousForm]:
    if form.degree < 1:
        raise ValueError("partial derivatives need degree >= 1")
    return [form.partial(i) for i in range(form.ambient_dim + 1)]


def substitute(form: HomogeneousForm, linear: Sequence[Sequence]) -> HomogeneousForm:
    """``form(L_0, ..., L_N)`` where ``linear[i]`` are coefficient vectors of
    linear forms in a new set of variables."""
    F = form.field
    if len(linear) != form.ambient_dim + 1:
        raise DimensionMismatch("need one linear form per variable")
    M = len(linear[0]) - 1
    lin = [HomogeneousForm.linear(F, row) for row in linear]
    d = form.degree
    powers = [[HomogeneousForm.constant(F, M)] for _ in lin]
    for i, L in enumerate(lin):
        for _ in range(d):
            powers[i].append(powers[i][-1] * L)

    def rec(terms: dict, var: int, deg: int) -> HomogeneousForm:
        if var == len(lin) - 1:
            c = terms.get((deg,), F.zero)
            return powers[var][deg].scale(c)
        groups: dict[int, dict] = {}
        for e, c in terms.items():
            groups.setdefault(e[0], {})[e[1:]] = c
        acc = HomogeneousForm.zero(F, M, deg)
        for a, sub in groups.items():
            inner = rec(sub, var + 1, deg - a)
            if inner.is_zero():
                continue
            acc = acc + powers[var][a] * inner
        return acc

    if form.is_zero():
        return HomogeneousForm.zero(F, M, d)
    return rec(form.coeffs, 0, d)


def restrict_to_line(form: HomogeneousForm, a: ProjectivePoint, b: ProjectivePoint) -> HomogeneousForm:
    """Binary form ``(s, t) -> form(s*a + t*b)``."""
    if a.coords == b.coords:
        raise EqualPoints("a line needs two distinct points")
    return substitute(form, [(x, y) for x, y in zip(a.coords, b.coords)])


def univariate_roots(binform: HomogeneousForm) -> list[ProjectivePoint]:
    """All F_p-rational zeros of a nonzero binary form, by scanning P^1(F_p)."""
    F = binform.field
    if binform.ambient_dim != 1:
        raise DimensionMismatch("expected a binary form")
    if F.kind != "fp":
        raise FieldTooLarge("root scanning needs a prime field")
    if F.p > 2**20:
        raise FieldTooLarge(f"p = {F.p} exceeds the scan limit 2^20")
    if binform.is_zero():
        raise ZeroForm("the zero form vanishes everywhere")
    p, d = F.p, binform.degree
    # f(1, t) = sum_j c_j t^j with c_j the coefficient of s^(d-j) t^j
    c = [binform.coeffs.get((d - j, j), 0) for j in range(d + 1)]
    t = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for j in range(d, -1, -1):
        acc = (acc * t + c[j]) % p
    roots = [ProjectivePoint(F, (1, int(x))) for x in np.flatnonzero(acc == 0)]
    if c[d] == 0:
        roots.append(ProjectivePoint(F, (0, 1)))
    return roots


def cone_pullback(plane_form: HomogeneousForm, proj: Projection) -> HomogeneousForm:
    """The cone over a plane curve with vertex the projection center."""
    if plane_form.ambient_dim != proj.target_dim:
        raise DimensionMismatch("form must live on the projection target")
    return substitute(plane_form, [list(f) for f in proj.forms])


def product(forms: Sequence[HomogeneousForm]) -> HomogeneousForm:
    it = iter(forms)
    acc = next(it)
    for f in it:
        acc = acc * f
    return acc


def evaluation_matrix(field: Field, coords: Sequence[Sequence], N: int, d: int):
    """Rows: points; columns: degree-d monomials in graded-lex order."""
    exps = monomial_basis(N, d)
    if field.kind == "fp":
        p = field.p
        X = np.array(coords, dtype=np.int64).reshape(-1, N + 1) % p
        s = X.shape[0]
        E = np.array(exps, dtype=np.int64)
        table = np.ones((s, N + 1, d + 1), dtype=np.int64)
        for e in range(1, d + 1):
            table[:, :, e] = table[:, :, e - 1] * X % p
        M = np.ones((s, len(exps)), dtype=np.int64)
        for i in range(N + 1):
            M = M * table[:, i, E[:, i]] % p
        return M
    rows = []
    for x in coords:
        pw = [[field.power(xi, e) for e in range(d + 1)] for xi in x]
        row = []
        for e in exps:
            v = field.one
            for i, k in enumerate(e):
                if k:
                    v = v * pw[i][k]
            row.append(v)
        rows.append(row)
    return rows


# --- text parser ----------------------------------------------------------

_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")
_FACTOR = re.compile(r"^(?:x(\d+)(?:\^(\d+))?|(\d+(?:/\d+)?))$")


def parse_form(text: str, field: Field, N: int | None = None) -> HomogeneousForm:
    """Parse sums of monomials such as ``"x0^2*x1 - 3*x2*x3*x4"``."""
    text = text.strip()
    if not text:
        raise ParseError("empty expression")
    raw_terms = []
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse near {text[pos:]!r}")
        sign, body = m.group(1), m.group(2).strip()
        if not body:
            raise ParseError("dangling sign")
        coeff = field(-1 if sign == "-" else 1)
        exps: dict[int, int] = {}
        for factor in body.split("*"):
            fm = _FACTOR.match(factor.strip())
            if not fm:
                raise ParseError(f"bad factor {factor!r}")
            if fm.group(1) is not None:
                i = int(fm.group(1))
                exps[i] = exps.get(i, 0) + int(fm.group(2) or 1)
            else:
                coeff = field.mul(coeff, field.parse(fm.group(3)))
        raw_terms.append((exps, coeff))
        pos = m.end()
    top = max((max(e) for e, _ in raw_terms if e), default=0)
    if N is None:
        N = top
    elif top > N:
        raise ParseError(f"variable x{top} outside P^{N}")
    degrees = {sum(e.values()) for e, _ in raw_terms}
    if len(degrees) != 1:
        raise ParseError("expression is not homogeneous")
    d = degrees.pop()
    terms: dict = {}
    for exps, c in raw_terms:
        key = tuple(exps.get(i, 0) for i in range(N + 1))
        terms[key] = field.add(terms.get(key, field.zero), c)
    return HomogeneousForm(field, N, d, terms)
