"""Exact arithmetic over the prime field F_q, the ring F_q[t], and the
rational function field K = F_q(t) with the valuation at infinity.

Polynomials are dense coefficient tuples, lowest degree first, with no
trailing zero coefficient; the zero polynomial is the empty tuple and has
degree NEG_INF.  Moduli are restricted to primes below 2**16, so field
arithmetic is a single modular reduction and inverses come from
pow(c, -1, q).  Prime-power fields are not supported.

The valuation at infinity of a nonzero f = num/den is
deg(den) - deg(num); the uniformizer is 1/t.  The valuation ring O is
used only through the predicate omega_infty(f) >= 0 and has no
representation of its own.
"""

from __future__ import annotations

from typing import Iterable, Tuple

NEG_INF = float("-inf")

_PRIME_LIMIT = 1 << 16


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


def check_modulus(q: int) -> int:
    if not isinstance(q, int) or not is_prime(q) or q >= _PRIME_LIMIT:
        raise ValueError(f"modulus must be a prime below 2**16, got {q!r}")
    return q


# ---------------------------------------------------------------------------
# Raw coefficient-tuple helpers.  These are the workhorses shared with the
# Laurent layer; all take the modulus explicitly and return trimmed tuples.
# ---------------------------------------------------------------------------

Coeffs = Tuple[int, ...]


def trim(cs: Iterable[int]) -> Coeffs:
    cs = tuple(cs)
    k = len(cs)
    while k and cs[k - 1] == 0:
        k -= 1
    return cs[:k]


def padd(a: Coeffs, b: Coeffs, q: int) -> Coeffs:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % q
    return trim(out)


def pneg(a: Coeffs, q: int) -> Coeffs:
    return tuple((-c) % q for c in a)


def psub(a: Coeffs, b: Coeffs, q: int) -> Coeffs:
    return padd(a, pneg(b, q), q)


def pscale(a: Coeffs, c: int, q: int) -> Coeffs:
    c %= q
    if c == 0:
        return ()
    return tuple((c * x) % q for x in a)


def pmul(a: Coeffs, b: Coeffs, q: int) -> Coeffs:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = (out[i + j] + x * y) % q
    return trim(out)


def pdivmod(a: Coeffs, b: Coeffs, q: int) -> tuple[Coeffs, Coeffs]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    inv_lead = pow(b[-1], -1, q)
    rem = list(a)
    quo = [0] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = (rem[k + len(b) - 1] * inv_lead) % q
        if c:
            quo[k] = c
            for j, y in enumerate(b):
                rem[k + j] = (rem[k + j] - c * y) % q
    return trim(quo), trim(rem)


def pmonic(a: Coeffs, q: int) -> Coeffs:
    if not a or a[-1] == 1:
        return a
    return pscale(a, pow(a[-1], -1, q), q)


def pgcd(a: Coeffs, b: Coeffs, q: int) -> Coeffs:
    while b:
        a, b = b, pdivmod(a, b, q)[1]
    return pmonic(a, q)


def peval(a: Coeffs, x: int, q: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % q
    return acc


# ---------------------------------------------------------------------------
# Public value classes.
# ---------------------------------------------------------------------------


class FieldElement:
    """A residue modulo a prime q."""

    __slots__ = ("residue", "modulus")

    def __init__(self, residue: int, modulus: int):
        check_modulus(modulus)
        self.residue = residue % modulus
        self.modulus = modulus

    def _co(self, other) -> "FieldElement":
        if isinstance(other, int):
            return FieldElement(other, self.modulus)
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ValueError("mixed moduli")
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._co(other)
        return FieldElement(self.residue + o.residue, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._co(other)
        return FieldElement(self.residue - o.residue, self.modulus)

    def __mul__(self, other):
        o = self._co(other)
        return FieldElement(self.residue * o.residue, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.residue, self.modulus)

    def inverse(self) -> "FieldElement":
        if self.residue == 0:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(pow(self.residue, -1, self.modulus), self.modulus)

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElement(pow(self.residue, k, self.modulus), self.modulus)

    def __bool__(self):
        return self.residue != 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self.residue == other % self.modulus
        return (
            isinstance(other, FieldElement)
            and self.modulus == other.modulus
            and self.residue == other.residue
        )

    def __hash__(self):
        return hash((self.residue, self.modulus))

    def __repr__(self):
        return f"{self.residue} (mod {self.modulus})"


class Polynomial:
    """Dense polynomial over F_q, lowest degree first, no trailing zeros."""

    __slots__ = ("coeffs", "q", "_hash")

    def __init__(self, coeffs: Iterable[int], q: int):
        check_modulus(q)
        self.coeffs = trim(c % q for c in coeffs)
        self.q = q
        self._hash = None

    # -- constructors --

    @classmethod
    def _raw(cls, coeffs: Coeffs, q: int) -> "Polynomial":
        # internal: coeffs already reduced and trimmed
        p = object.__new__(cls)
        p.coeffs = coeffs
        p.q = q
        p._hash = None
        return p

    @classmethod
    def zero(cls, q: int) -> "Polynomial":
        return cls((), q)

    @classmethod
    def one(cls, q: int) -> "Polynomial":
        return cls((1,), q)

    @classmethod
    def constant(cls, c: int, q: int) -> "Polynomial":
        return cls((c,), q)

    @classmethod
    def x(cls, q: int) -> "Polynomial":
        return cls((0, 1), q)

    @classmethod
    def monomial(cls, c: int, k: int, q: int) -> "Polynomial":
        return cls((0,) * k + (c,), q)

    # -- structure --

    @property
    def degree(self):
        """Degree of the polynomial; NEG_INF for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def leading(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def monic(self) -> "Polynomial":
        return Polynomial(pmonic(self.coeffs, self.q), self.q)

    def evaluate(self, x: int) -> int:
        return peval(self.coeffs, x, self.q)

    def reversed_coeffs(self) -> Coeffs:
        """Coefficients of t^deg * p(1/t); empty for zero."""
        return trim(reversed(self.coeffs))

    # -- arithmetic --

    def _co(self, other) -> "Polynomial":
        if isinstance(other, int):
            return Polynomial((other,), self.q)
        if isinstance(other, Polynomial):
            if other.q != self.q:
                raise ValueError("mixed moduli")
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return Polynomial._raw(padd(self.coeffs, o.coeffs, self.q), self.q)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return Polynomial._raw(psub(self.coeffs, o.coeffs, self.q), self.q)

    def __neg__(self):
        return Polynomial._raw(pneg(self.coeffs, self.q), self.q)

    def __mul__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return Polynomial._raw(pmul(self.coeffs, o.coeffs, self.q), self.q)

    __rmul__ = __mul__

    def __divmod__(self, other):
        o = self._co(other)
        quo, rem = pdivmod(self.coeffs, o.coeffs, self.q)
        return Polynomial._raw(quo, self.q), Polynomial._raw(rem, self.q)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == trim((other % self.q,))
        return (
            isinstance(other, Polynomial)
            and self.q == other.q
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.coeffs, self.q))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, q={self.q})"


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd of two polynomials over the same field."""
    if f.q != g.q:
        raise ValueError("mixed moduli")
    return Polynomial(pgcd(f.coeffs, g.coeffs, f.q), f.q)


def poly_divmod(f: Polynomial, g: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Euclidean division f = quo * g + rem with deg rem < deg g."""
    return divmod(f, g)


class RationalFunction:
    """Reduced fraction num/den over F_q[t] with monic nonzero denominator."""

    __slots__ = ("num", "den", "q", "_hash")

    def __init__(self, num: Polynomial, den: Polynomial):
        if num.q != den.q:
            raise ValueError("mixed moduli")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        q = num.q
        ncs, dcs = num.coeffs, den.coeffs
        if not ncs:
            dcs = (1,)
        elif dcs != (1,):
            g = pgcd(ncs, dcs, q)
            if len(g) > 1:
                ncs = pdivmod(ncs, g, q)[0]
                dcs = pdivmod(dcs, g, q)[0]
            lead = dcs[-1]
            if lead != 1:
                inv = pow(lead, -1, q)
                ncs = pscale(ncs, inv, q)
                dcs = pscale(dcs, inv, q)
        self.num = Polynomial._raw(ncs, q)
        self.den = Polynomial._raw(dcs, q)
        self.q = q
        self._hash = None

    @classmethod
    def _raw_poly(cls, num: Polynomial) -> "RationalFunction":
        # internal: polynomial value, denominator one
        f = object.__new__(cls)
        f.num = num
        f.den = Polynomial._raw((1,), num.q)
        f.q = num.q
        f._hash = None
        return f

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "RationalFunction":
        return cls(p, Polynomial.one(p.q))

    @classmethod
    def zero(cls, q: int) -> "RationalFunction":
        return cls(Polynomial.zero(q), Polynomial.one(q))

    @classmethod
    def one(cls, q: int) -> "RationalFunction":
        return cls(Polynomial.one(q), Polynomial.one(q))

    @classmethod
    def constant(cls, c: int, q: int) -> "RationalFunction":
        return cls(Polynomial.constant(c, q), Polynomial.one(q))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def _co(self, other) -> "RationalFunction":
        if isinstance(other, int):
            return RationalFunction.constant(other, self.q)
        if isinstance(other, Polynomial):
            return RationalFunction.from_polynomial(other)
        if isinstance(other, RationalFunction):
            if other.q != self.q:
                raise ValueError("mixed moduli")
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        if self.den.is_one() and o.den.is_one():
            return RationalFunction._raw_poly(self.num + o.num)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        f = object.__new__(RationalFunction)
        f.num = -self.num
        f.den = self.den
        f.q = self.q
        f._hash = None
        return f

    def __sub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __mul__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        if self.den.is_one() and o.den.is_one():
            return RationalFunction._raw_poly(self.num * o.num)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Polynomial)):
            other = self._co(other)
        return (
            isinstance(other, RationalFunction)
            and self.q == other.q
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num.coeffs, self.den.coeffs, self.q))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def evaluate(self, x: int) -> int:
        d = self.den.evaluate(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return (self.num.evaluate(x) * pow(d, -1, self.q)) % self.q

    def key(self):
        return (self.num.coeffs, self.den.coeffs)

    def __str__(self):
        return format_rational(self)

    def __repr__(self):
        return f"RationalFunction({format_rational(self)!r}, q={self.q})"


def rat_normalize(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Reduced rational function equal to num/den as a fraction."""
    return RationalFunction(num, den)


def omega_infty(f) -> int:
    """Valuation at infinity: deg(den) - deg(num).  Undefined for zero."""
    if isinstance(f, Polynomial):
        f = RationalFunction.from_polynomial(f)
    if f.is_zero():
        raise ValueError("valuation of zero is undefined")
    return int(f.den.degree - f.num.degree)


# ---------------------------------------------------------------------------
# Textual form: polynomials as "c0 + c1*t + ...", rationals as "num/den".
# ---------------------------------------------------------------------------


def format_polynomial(p: Polynomial, var: str = "t") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        if k == 0:
            parts.append(str(c))
        else:
            head = "" if c == 1 else f"{c}*"
            power = var if k == 1 else f"{var}^{k}"
            parts.append(head + power)
    return " + ".join(parts)


def parse_polynomial(text: str, q: int, var: str = "t") -> Polynomial:
    """Parse "c0 + c1*t + c2*t^2" style text into a polynomial."""
    check_modulus(q)
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    coeffs: dict[int, int] = {}
    for raw in text.replace("-", "+-").split("+"):
        term = raw.strip().replace(" ", "")
        if not term:
            continue
        sign = 1
        if term.startswith("-"):
            sign = -1
            term = term[1:]
        if var in term:
            head, _, tail = term.partition(var)
            c = int(head.rstrip("*")) if head.rstrip("*") else 1
            k = int(tail[1:]) if tail.startswith("^") else (1 if not tail else None)
            if k is None:
                raise ValueError(f"cannot parse term {raw!r}")
        else:
            c, k = int(term), 0
        coeffs[k] = (coeffs.get(k, 0) + sign * c) % q
    size = max(coeffs) + 1 if coeffs else 0
    dense = [0] * size
    for k, c in coeffs.items():
        dense[k] = c
    return Polynomial(dense, q)


def format_rational(f: RationalFunction, var: str = "t") -> str:
    num = format_polynomial(f.num, var)
    if f.den.is_one():
        return num
    return f"({num})/({format_polynomial(f.den, var)})"


def parse_rational(text: str, q: int, var: str = "t") -> RationalFunction:
    """Parse "num/den" text (denominator optional) into a rational function."""
    if "/" in text:
        top, _, bottom = text.partition("/")
        return RationalFunction(
            parse_polynomial(top.strip().strip("()"), q, var),
            parse_polynomial(bottom.strip().strip("()"), q, var),
        )
    return RationalFunction.from_polynomial(parse_polynomial(text, q, var))
