"""Laurent polynomials over F_q in the uniformizer s = 1/t.

A Laurent polynomial is a pair (off, coeffs) with coeffs a trimmed tuple
whose first entry is nonzero; the value is sum(coeffs[k] * s**(off+k)).
Zero is (0, ()).  These are the working scalars of the lattice reduction:
entries of group elements over F_q[t] become Laurent polynomials in s, and
the canonical form of a lattice class only ever needs finitely many series
coefficients, each of which is exactly computable (units of the valuation
ring are inverted as power series to a sufficient, explicitly chosen
order, so no precision is ever lost).
"""

from __future__ import annotations

from .polyring import Coeffs, padd, pmul, pneg, pscale, trim

Laurent = tuple[int, Coeffs]

LZERO: Laurent = (0, ())


def lp_normalize(off: int, coeffs) -> Laurent:
    cs = tuple(coeffs)
    lead = 0
    while lead < len(cs) and cs[lead] == 0:
        lead += 1
    cs = trim(cs[lead:])
    if not cs:
        return LZERO
    return (off + lead, cs)


def lp_is_zero(a: Laurent) -> bool:
    return not a[1]


def lp_ord(a: Laurent) -> int:
    """Order of vanishing at s = 0; raises on zero."""
    if not a[1]:
        raise ValueError("order of the zero Laurent polynomial")
    return a[0]


def lp_top(a: Laurent) -> int:
    """Largest exponent carrying a nonzero coefficient."""
    if not a[1]:
        raise ValueError("top of the zero Laurent polynomial")
    return a[0] + len(a[1]) - 1


def lp_monomial(c: int, k: int, q: int) -> Laurent:
    c %= q
    if c == 0:
        return LZERO
    return (k, (c,))


def lp_add(a: Laurent, b: Laurent, q: int) -> Laurent:
    if not a[1]:
        return b
    if not b[1]:
        return a
    off = min(a[0], b[0])
    pa = (0,) * (a[0] - off) + a[1]
    pb = (0,) * (b[0] - off) + b[1]
    return lp_normalize(off, padd(pa, pb, q))


def lp_neg(a: Laurent, q: int) -> Laurent:
    return (a[0], pneg(a[1], q)) if a[1] else LZERO


def lp_sub(a: Laurent, b: Laurent, q: int) -> Laurent:
    return lp_add(a, lp_neg(b, q), q)


def lp_mul(a: Laurent, b: Laurent, q: int) -> Laurent:
    if not a[1] or not b[1]:
        return LZERO
    return lp_normalize(a[0] + b[0], pmul(a[1], b[1], q))


def lp_scale(a: Laurent, c: int, q: int) -> Laurent:
    c %= q
    if c == 0 or not a[1]:
        return LZERO
    return (a[0], pscale(a[1], c, q))


def lp_shift(a: Laurent, k: int) -> Laurent:
    """Multiply by s**k."""
    if not a[1]:
        return LZERO
    return (a[0] + k, a[1])


def lp_split(a: Laurent, cutoff: int) -> tuple[Laurent, Laurent]:
    """Split a = low + s**cutoff * high with low supported below cutoff."""
    if not a[1]:
        return LZERO, LZERO
    off, cs = a
    if off >= cutoff:
        return LZERO, lp_normalize(off - cutoff, cs)
    if off + len(cs) <= cutoff:
        return a, LZERO
    k = cutoff - off
    return lp_normalize(off, cs[:k]), lp_normalize(0, cs[k:])


def lp_from_poly_in_t(coeffs: Coeffs) -> Laurent:
    """Rewrite a polynomial in t as a Laurent polynomial in s = 1/t."""
    cs = trim(coeffs)
    if not cs:
        return LZERO
    return lp_normalize(-(len(cs) - 1), tuple(reversed(cs)))


def lp_to_rational_in_t(a: Laurent, q: int):
    """Rewrite in the variable t = 1/s as a reduced rational function."""
    from .polyring import Polynomial, RationalFunction

    if not a[1]:
        return RationalFunction.zero(q)
    top = lp_top(a)
    shift = max(top, 0)
    num = [0] * (shift - a[0] + 1)
    for k, c in enumerate(a[1]):
        num[shift - (a[0] + k)] = c
    return RationalFunction(
        Polynomial(num, q), Polynomial.monomial(1, shift, q)
    )


def series_inv(unit: Coeffs, q: int, nterms: int) -> Coeffs:
    """First nterms coefficients of the power-series inverse of a unit."""
    if not unit or unit[0] == 0:
        raise ZeroDivisionError("series inverse needs a unit constant term")
    if nterms <= 0:
        return ()
    inv0 = pow(unit[0], -1, q)
    out = [inv0] + [0] * (nterms - 1)
    for k in range(1, nterms):
        acc = 0
        for j in range(1, min(k, len(unit) - 1) + 1):
            acc += unit[j] * out[k - j]
        out[k] = (-inv0 * acc) % q
    return tuple(out)


def lp_principal_part(num: Laurent, den_unit: Coeffs, cutoff: int, q: int) -> Laurent:
    """Terms of num/den below s**cutoff; den must be a unit polynomial.

    The output is exact: the series inverse of the unit is computed to
    exactly as many terms as the requested coefficients require.
    """
    if not num[1]:
        return LZERO
    v = num[0]
    nterms = cutoff - v
    if nterms <= 0:
        return LZERO
    inv = series_inv(den_unit, q, nterms)
    prod = pmul(num[1][:nterms], inv, q)
    return lp_normalize(v, prod[:nterms])


def lp_str(a: Laurent, var: str = "s") -> str:
    if not a[1]:
        return "0"
    parts = []
    for k, c in enumerate(a[1]):
        if c == 0:
            continue
        e = a[0] + k
        if e == 0:
            parts.append(str(c))
        else:
            head = "" if c == 1 else f"{c}*"
            power = var if e == 1 else f"{var}^{e}"
            parts.append(head + power)
    return " + ".join(parts)
