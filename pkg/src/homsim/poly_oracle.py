"""Exact bivariate polynomial algebra over the Gaussian rationals.

Everything here is exact: coefficients are pairs of :class:`fractions.Fraction`,
so the LG/HG polynomial identity and the Bell-state decompositions built on it
are checked with zero numerical error. No floats enter this module.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Mapping, Union

from homsim.mode_index import HGIndex

Rational = Union[int, Fraction]


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Rational = 0, im: Rational = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        raise TypeError(f"cannot represent {value!r} exactly as a Gaussian rational")

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / den, num.im / den)

    def __pow__(self, k: int):
        if k < 0:
            return GaussianRational(1) / (self ** -k)
        result = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return _imag_str(self.im)
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{_imag_str(abs(self.im))})"


def _imag_str(v: Fraction) -> str:
    if v == 1:
        return "i"
    if v == -1:
        return "-i"
    return f"{v}i"


I = GaussianRational(0, 1)

Exponent = tuple[int, int]


class BiPoly:
    """Sparse polynomial ``sum c_ij x^i y^j`` with Gaussian-rational coefficients.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their term dictionaries are.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Exponent, object] | None = None):
        clean: dict[Exponent, GaussianRational] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent {(i, j)}")
            c = GaussianRational.coerce(c)
            if c:
                clean[(i, j)] = c
        self.terms = clean

    @classmethod
    def constant(cls, c) -> "BiPoly":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "BiPoly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BiPoly":
        return cls({(0, 1): 1})

    @classmethod
    def from_univariate(cls, coeffs: Iterable[Rational], var: str = "x") -> "BiPoly":
        """Lift ascending coefficients of a univariate polynomial into x or y."""
        if var not in ("x", "y"):
            raise ValueError("var must be 'x' or 'y'")
        terms = {}
        for k, c in enumerate(coeffs):
            terms[(k, 0) if var == "x" else (0, k)] = c
        return cls(terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((i + j for i, j in self.terms), default=-1)

    def leading(self) -> tuple[Exponent, GaussianRational]:
        """Highest monomial in graded lex order (total degree, then x power)."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return BiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        out: dict[Exponent, GaussianRational] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                e = (i1 + i2, j1 + j2)
                prod = c1 * c2
                out[e] = out[e] + prod if e in out else prod
        return BiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = BiPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "BiPoly":
        """Conjugate the coefficients (x, y treated as real)."""
        return BiPoly({e: c.conjugate() for e, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            try:
                other = _as_poly(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"BiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            mono = _monomial_str(e)
            cs = str(c)
            if mono and cs == "1":
                cs = ""
            elif mono and cs == "-1":
                cs = "-"
            piece = cs + ("*" if cs not in ("", "-") and mono else "") + mono
            parts.append(piece or "1")
        text = parts[0]
        for piece in parts[1:]:
            text += " - " + piece[1:] if piece.startswith("-") else " + " + piece
        return text


def _grlex_key(e: Exponent) -> tuple[int, int]:
    return (e[0] + e[1], e[0])


def _monomial_str(e: Exponent) -> str:
    out = []
    for name, k in zip("xy", e):
        if k == 1:
            out.append(name)
        elif k > 1:
            out.append(f"{name}^{k}")
    return "*".join(out)


def _as_poly(value) -> BiPoly:
    if isinstance(value, BiPoly):
        return value
    return BiPoly.constant(GaussianRational.coerce(value))


def hermite(n: int) -> tuple[int, ...]:
    """Physicists' Hermite polynomial H_n as ascending integer coefficients.

    Uses H_0 = 1, H_1 = 2x, H_{k+1} = 2x H_k - 2k H_{k-1}.
    """
    if n < 0:
        raise ValueError("Hermite degree must be non-negative")
    prev, cur = [1], [0, 2]
    if n == 0:
        return (1,)
    for k in range(1, n):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= 2 * k * c
        prev, cur = cur, nxt
    return tuple(cur)


def laguerre(p: int, a: int) -> tuple[Fraction, ...]:
    """Associated Laguerre polynomial L_p^a(t) as ascending rational coefficients."""
    if p < 0 or a < 0:
        raise ValueError("Laguerre indices must be non-negative")
    return tuple(Fraction((-1) ** k * comb(p + a, p - k), factorial(k)) for k in range(p + 1))


def hermite_product(a: int, b: int) -> BiPoly:
    """H_a(x) H_b(y)."""
    return BiPoly.from_univariate(hermite(a), "x") * BiPoly.from_univariate(hermite(b), "y")


def lhs_eq1(p: int, ell: int) -> BiPoly:
    """LG side of the LG/HG identity.

    ``(-1)^(p+|l|) 2^(2p+|l|) p! (x +- iy)^|l| L_p^|l|(x^2+y^2)``, with ``+`` for
    ``ell >= 0``.
    """
    if p < 0:
        raise ValueError("radial index must be non-negative")
    a = abs(ell)
    sign = 1 if ell >= 0 else -1
    prefactor = (-1) ** (p + a) * 2 ** (2 * p + a) * factorial(p)
    vortex = (BiPoly.x() + BiPoly.y() * (I * sign)) ** a
    r2 = BiPoly.x() ** 2 + BiPoly.y() ** 2
    radial = BiPoly()
    for k, c in enumerate(laguerre(p, a)):
        radial = radial + r2 ** k * c
    return vortex * radial * prefactor


def rhs_eq1(p: int, ell: int) -> BiPoly:
    """HG side of the identity: the double sum over Hermite products.

    The phase factor is ``(-i)^(|l|+n)`` for ``ell >= 0`` and ``(+i)^(|l|+n)``
    otherwise.
    """
    if p < 0:
        raise ValueError("radial index must be non-negative")
    return hermite_synthesize(rhs_coefficients(p, ell))


def rhs_coefficients(p: int, ell: int) -> dict[HGIndex, GaussianRational]:
    """Coefficients of H_a(x)H_b(y) read directly off the double sum."""
    a = abs(ell)
    unit = -I if ell >= 0 else I
    N = 2 * p + a
    out: dict[HGIndex, GaussianRational] = {}
    for m in range(p + 1):
        for n in range(a + 1):
            key = HGIndex(2 * m + n, N - 2 * m - n)
            c = unit ** (a + n) * (comb(p, m) * comb(a, n))
            out[key] = out[key] + c if key in out else c
    return {k: v for k, v in out.items() if v}


def hermite_synthesize(coeffs: Mapping[HGIndex, object]) -> BiPoly:
    """sum c_ab H_a(x) H_b(y)."""
    total = BiPoly()
    for mode, c in coeffs.items():
        total = total + hermite_product(mode.m, mode.n) * GaussianRational.coerce(c)
    return total


def hermite_project(poly: BiPoly) -> dict[HGIndex, GaussianRational]:
    """Express ``poly`` exactly in the basis {H_a(x) H_b(y)}.

    Repeatedly cancels the leading monomial x^a y^b against H_a(x)H_b(y), whose
    own leading term is 2^(a+b) x^a y^b and whose remaining terms are all of
    lower total degree.
    """
    rest = poly
    out: dict[HGIndex, GaussianRational] = {}
    while not rest.is_zero():
        (a, b), lead = rest.leading()
        c = lead / (2 ** (a + b))
        out[HGIndex(a, b)] = c
        rest = rest - hermite_product(a, b) * c
    return out


def eq1_identity_check(p: int, ell: int) -> bool:
    """True iff the LG and HG sides of the identity agree as exact polynomials."""
    return (lhs_eq1(p, ell) - rhs_eq1(p, ell)).is_zero()


def raw_lg_coefficients(p: int, ell: int) -> dict[HGIndex, GaussianRational]:
    """Unnormalized Hermite-product expansion of the LG polynomial (p, ell)."""
    return hermite_project(lhs_eq1(p, ell))


def pair_coefficients(
    terms: Iterable[tuple[object, tuple[int, int], tuple[int, int]]],
) -> dict[tuple[HGIndex, HGIndex], GaussianRational]:
    """Joint Hermite-product coefficients of a two-photon LG combination.

    ``terms`` holds ``(weight, (pA, ellA), (pB, ellB))``; each term contributes
    ``weight * raw(A) (x) raw(B)`` using the unnormalized oracle expansions.
    """
    out: dict[tuple[HGIndex, HGIndex], GaussianRational] = {}
    for weight, (pa, la), (pb, lb) in terms:
        w = GaussianRational.coerce(weight)
        ca = raw_lg_coefficients(pa, la)
        cb = raw_lg_coefficients(pb, lb)
        for ma, va in ca.items():
            for mb, vb in cb.items():
                key = (ma, mb)
                v = w * va * vb
                out[key] = out[key] + v if key in out else v
    return {k: v for k, v in out.items() if v}
