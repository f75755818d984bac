"""Dense univariate polynomial helpers over the rationals.

Polynomials are tuples of coefficients, constant term first.  Everything
here is exact: coefficients are ints or ``fractions.Fraction``, and root
counting goes through Sturm chains so that isolating intervals can be
certified rather than guessed.
"""

from fractions import Fraction
from math import gcd as int_gcd

ZERO = ()


def trim(coeffs):
    """Drop trailing zero coefficients; the zero polynomial is ()."""
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def degree(p):
    return len(p) - 1


def add(p, q):
    n = max(len(p), len(q))
    return trim(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def neg(p):
    return tuple(-c for c in p)


def sub(p, q):
    return add(p, neg(q))


def mul(p, q):
    if not p or not q:
        return ZERO
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def scale(p, c):
    if c == 0:
        return ZERO
    return tuple(a * c for a in p)


def div_mod(p, q):
    """Polynomial division over Q; returns (quotient, remainder)."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in p]
    quo = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    lead = Fraction(q[-1])
    dq = len(q) - 1
    for i in range(len(rem) - 1, dq - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        f = c / lead
        quo[i - dq] = f
        for j, b in enumerate(q):
            rem[i - dq + j] -= f * b
    return trim(quo), trim(rem)


def monic(p):
    if not p:
        return ZERO
    lead = Fraction(p[-1])
    return tuple(Fraction(c) / lead for c in p)


def gcd(p, q):
    """Monic polynomial gcd over Q via the Euclidean remainder chain."""
    a, b = trim(p), trim(q)
    while b:
        a, b = b, div_mod(a, b)[1]
    return monic(a)


def extended_gcd(p, q):
    """Return (g, u, v) with u*p + v*q = g and g monic."""
    a, b = trim(p), trim(q)
    ua, va = (Fraction(1),), ZERO
    ub, vb = ZERO, (Fraction(1),)
    while b:
        quo, rem = div_mod(a, b)
        a, b = b, rem
        ua, ub = ub, sub(ua, mul(quo, ub))
        va, vb = vb, sub(va, mul(quo, vb))
    if not a:
        return ZERO, ZERO, ZERO
    lead = Fraction(a[-1])
    inv = 1 / lead
    return scale(a, inv), scale(ua, inv), scale(va, inv)


def derivative(p):
    return trim(i * c for i, c in enumerate(p) if i > 0)


def square_free_part(p):
    """p with repeated roots collapsed to simple ones."""
    p = trim(p)
    if degree(p) < 1:
        return p
    g = gcd(p, derivative(p))
    if degree(g) < 1:
        return p
    return div_mod(p, g)[0]


def content(p):
    c = 0
    for a in p:
        c = int_gcd(c, abs(a))
    return c


def to_int_poly(p):
    """Clear denominators and content; normalize the leading sign to +."""
    p = trim(p)
    if not p:
        return ZERO
    den = 1
    for c in p:
        den = den * Fraction(c).denominator // int_gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in p]
    g = content(ints)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def evaluate(p, x):
    """Horner evaluation at a rational point."""
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def evaluate_interval(p, lo, hi):
    """Enclosure of p over [lo, hi] by interval Horner; exact endpoints."""
    acc_lo = Fraction(0)
    acc_hi = Fraction(0)
    for c in reversed(p):
        cands = (acc_lo * lo, acc_lo * hi, acc_hi * lo, acc_hi * hi)
        acc_lo = min(cands) + c
        acc_hi = max(cands) + c
    return acc_lo, acc_hi


def sturm_chain(p):
    chain = [trim(p)]
    d = derivative(p)
    if d:
        chain.append(d)
        while True:
            rem = div_mod(chain[-2], chain[-1])[1]
            if not rem:
                break
            chain.append(neg(rem))
    return chain


def _variations(chain, x):
    count = 0
    prev = 0
    for q in chain:
        s = evaluate(q, x)
        s = (s > 0) - (s < 0)
        if s != 0:
            if prev != 0 and s != prev:
                count += 1
            prev = s
    return count


def count_roots(chain, lo, hi):
    """Number of distinct real roots in (lo, hi]; endpoints must be rational."""
    if lo >= hi:
        return 0
    return _variations(chain, lo) - _variations(chain, hi)
