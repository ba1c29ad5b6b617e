"""Ordering of factored letters N(w) whose exponents may themselves be huge.

ln N(w) = sum_i (w_i + 1) ln q_i.  Two codes are ordered by the sign of the
difference of these sums, taken position by position so that shared
exponents cancel exactly.  Magnitudes that do not fit in a float are kept as
iterated exponentials: a `Big` is an mpf, or ``Exp(inner)`` meaning
e**inner with inner > CUT.  Whenever the working precision cannot separate
two quantities the comparison raises `Ambiguous` and the caller retries at
higher precision; it never guesses.
"""

from __future__ import annotations

import mpmath

CUT = 10 ** 6


class Ambiguous(Exception):
    pass


class Exp:
    __slots__ = ("inner",)

    def __init__(self, inner):
        self.inner = inner

    def __repr__(self):
        return f"Exp({self.inner!r})"


def _mpf(x):
    return x if isinstance(x, Exp) else mpmath.mpf(x)


def big_exp(x):
    if isinstance(x, Exp) or x > CUT:
        return Exp(x)
    return mpmath.exp(x)


def cmp_big(a, b, strict: bool = True) -> int:
    if isinstance(a, Exp) and isinstance(b, Exp):
        return cmp_big(a.inner, b.inner, strict)
    if isinstance(a, Exp):
        return 1
    if isinstance(b, Exp):
        return -1
    d = a - b
    tol = mpmath.ldexp(max(abs(a), abs(b)), -(mpmath.mp.prec - 24))
    if abs(d) <= tol:
        if strict:
            raise Ambiguous
        return 0
    return 1 if d > 0 else -1


def add_small(a, c):
    """a + c for a modest mpf c; negligible against an Exp."""
    return a if isinstance(a, Exp) else a + c


def log_sum_exp(xs: list):
    """ln(sum e^x) for Bigs."""
    m = xs[0]
    for x in xs[1:]:
        if cmp_big(x, m, strict=False) > 0:
            m = x
    if isinstance(m, Exp):
        return m   # the other terms move ln of the sum by at most ln(len), nothing at this size
    return m + mpmath.log(mpmath.fsum(mpmath.exp(x - m) for x in xs if not isinstance(x, Exp)))


def _gap_correction(gap):
    """ln(1 - e^-gap) for gap > 0 given as a Big."""
    if isinstance(gap, Exp) or gap > 60:
        return mpmath.mpf(0)
    if gap < mpmath.mpf(10) ** -20:
        return mpmath.log(gap)
    return mpmath.log(-mpmath.expm1(-gap))


def _lnln_q(i):
    from .coding import nth_prime
    return mpmath.log(mpmath.log(nth_prime(i)))


def ln_letter(x):
    """ln x as a Big, for an int or a Code."""
    from .coding import Code
    if not isinstance(x, Code):
        return mpmath.log(mpmath.mpf(x))
    terms = [add_small(ln_exponent(a), _lnln_q(i)) for i, a in enumerate(x.word)]
    return big_exp(log_sum_exp(terms))


def ln_exponent(a):
    """ln(a + 1)."""
    from .coding import Code
    if isinstance(a, Code):
        return ln_letter(a)   # +1 is invisible at this size
    return mpmath.log(mpmath.mpf(a + 1))


def _signed_gap(a, b):
    """(sign, ln|a - b|) for letters a != b, or exponents at one position."""
    from .coding import Code
    if not isinstance(a, Code) and not isinstance(b, Code):
        d = a - b
        return (1 if d > 0 else -1), mpmath.log(mpmath.mpf(abs(d)))
    s, ln_r = ln_ratio(a, b)
    big = a if s > 0 else b
    r = big_exp(ln_r)   # |ln a - ln b|
    return s, add_small(ln_letter(big), _gap_correction(r))


def ln_ratio(x, y):
    """(sign, ln|ln x - ln y|) for distinct letters x, y."""
    from .coding import Code
    if x == y:
        raise ValueError("equal letters")
    if not isinstance(x, Code) and not isinstance(y, Code):
        v = mpmath.log1p(mpmath.mpf(x - y) / mpmath.mpf(y))
        return (1 if x > y else -1), mpmath.log(abs(v))
    if not isinstance(x, Code) or not isinstance(y, Code):
        # a code always exceeds a materialized int
        s = 1 if isinstance(x, Code) else -1
        big, small = (x, y) if s > 0 else (y, x)
        lb, ls = ln_letter(big), ln_letter(small)
        if isinstance(lb, Exp):
            return s, ln_letter_ln(big)
        return s, mpmath.log(lb - ls)
    pos, neg = [], []
    n = max(len(x.word), len(y.word))
    for i in range(n):
        a = x.word[i] if i < len(x.word) else None
        b = y.word[i] if i < len(y.word) else None
        if a == b:
            continue
        if a is None:
            s, g = -1, ln_exponent(b)
        elif b is None:
            s, g = 1, ln_exponent(a)
        else:
            s, g = _signed_gap(a, b)
        (pos if s > 0 else neg).append(add_small(g, _lnln_q(i)))
    if not neg:
        return 1, log_sum_exp(pos)
    if not pos:
        return -1, log_sum_exp(neg)
    lp, ln_ = log_sum_exp(pos), log_sum_exp(neg)
    c = cmp_big(lp, ln_)
    hi, lo = (lp, ln_) if c > 0 else (ln_, lp)
    gap = Exp(0) if isinstance(hi, Exp) else hi - lo
    return c, add_small(hi, _gap_correction(gap))


def ln_letter_ln(x):
    """ln ln x as a Big, for a code whose log is itself an Exp."""
    v = ln_letter(x)
    return v.inner if isinstance(v, Exp) else mpmath.log(v)


def compare_codes(x, y) -> int:
    """Exact sign of x - y, or Ambiguous at the current precision."""
    if x == y:
        return 0
    return ln_ratio(x, y)[0]
