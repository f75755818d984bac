"""Exact and certified-approximate real scalars.

Three representations share one interface:

* rational -- ``fractions.Fraction``, exact and decidable everywhere;
* algebraic -- an element of a declared real number field Q(g), stored as a
  rational polynomial in the generator g, where g is pinned down by an
  integer polynomial and an isolating interval.  Equality, sign, floor and
  comparison are all decided exactly (the modulus only needs to be
  square-free; zero divisors are handled through gcd splitting);
* interval -- a rational enclosure with no refinement oracle, good enough
  for ingesting decimal data but refused wherever a certified answer is
  required.

Values are immutable.  The only internal mutation is the monotone
shrinking of a field's root enclosure, which never changes the value any
scalar represents and is safe under concurrent readers.
"""

from enum import Enum
from fractions import Fraction
from math import floor as _floor

from . import polynomials as poly
from .errors import BudgetExceeded, IndeterminateFloor, MalformedInput

DEFAULT_REFINE_BUDGET = 256
_SIGN_BUDGET = 4096


class Ordering(Enum):
    LT = -1
    EQ = 0
    GT = 1
    INDETERMINATE = 2


class NumberField:
    """The real field Q(g), g the unique root of ``modulus`` in (lo, hi).

    ``modulus`` is an integer polynomial (constant term first).  It is
    reduced to its square-free part on construction and the interval is
    checked, by Sturm count, to isolate exactly one real root.
    """

    __slots__ = ("modulus", "_lo", "_hi", "_chain", "_exact_root")

    def __init__(self, modulus, lo, hi):
        mod = poly.to_int_poly(poly.square_free_part(poly.trim(modulus)))
        if poly.degree(mod) < 2:
            raise MalformedInput("field modulus must have degree >= 2")
        lo = Fraction(lo)
        hi = Fraction(hi)
        if not lo < hi:
            raise MalformedInput("isolating interval is empty")
        if poly.evaluate(mod, lo) == 0 or poly.evaluate(mod, hi) == 0:
            raise MalformedInput("isolating interval endpoints must not be roots")
        chain = poly.sturm_chain(mod)
        if poly.count_roots(chain, lo, hi) != 1:
            raise MalformedInput("interval does not isolate exactly one root")
        self.modulus = mod
        self._lo = lo
        self._hi = hi
        self._chain = chain
        self._exact_root = None

    @property
    def degree(self):
        return poly.degree(self.modulus)

    def enclosure(self):
        if self._exact_root is not None:
            return self._exact_root, self._exact_root
        return self._lo, self._hi

    def refine_once(self):
        """One bisection step on the root enclosure."""
        if self._exact_root is not None:
            return
        mid = (self._lo + self._hi) / 2
        v = poly.evaluate(self.modulus, mid)
        if v == 0:
            # the isolated root happens to be rational; pin it
            self._exact_root = mid
            return
        if (v > 0) == (poly.evaluate(self.modulus, self._hi) > 0):
            self._hi = mid
        else:
            self._lo = mid

    def refine_to(self, eps):
        eps = Fraction(eps)
        while self._exact_root is None and self._hi - self._lo > eps:
            self.refine_once()

    def same_root(self, other):
        """Whether ``other`` pins the same real root of the same modulus."""
        if other is self:
            return True
        if not isinstance(other, NumberField) or other.modulus != self.modulus:
            return False
        lo = max(self._lo, other._lo)
        hi = min(self._hi, other._hi)
        if lo >= hi:
            return False
        return poly.count_roots(self._chain, lo, hi) == 1

    def __repr__(self):
        lo, hi = self.enclosure()
        return "NumberField(%r, %s, %s)" % (list(self.modulus), lo, hi)


def _reduce(coeffs, field):
    return poly.div_mod(poly.trim(coeffs), field.modulus)[1]


def _elem_is_zero(coeffs, field):
    c = poly.trim(coeffs)
    if not c:
        return True
    if poly.degree(c) == 0:
        return False
    if field._exact_root is not None:
        return poly.evaluate(c, field._exact_root) == 0
    g = poly.gcd(c, field.modulus)
    if poly.degree(g) < 1:
        return False
    # c vanishes at the generator iff a root of gcd(c, modulus) sits in
    # the isolating interval (square-free modulus keeps this decidable
    # even when the modulus is reducible).
    lo, hi = field.enclosure()
    return poly.count_roots(poly.sturm_chain(g), lo, hi) == 1


def _elem_sign(coeffs, field):
    if _elem_is_zero(coeffs, field):
        return 0
    if field._exact_root is not None:
        v = poly.evaluate(coeffs, field._exact_root)
        return 1 if v > 0 else -1
    for _ in range(_SIGN_BUDGET):
        lo, hi = field.enclosure()
        vlo, vhi = poly.evaluate_interval(coeffs, lo, hi)
        if vlo > 0:
            return 1
        if vhi < 0:
            return -1
        field.refine_once()
    raise BudgetExceeded("sign refinement did not settle")


def _elem_inverse(coeffs, field):
    c = poly.trim(coeffs)
    if _elem_is_zero(c, field):
        raise ZeroDivisionError("division by zero field element")
    return _inv_mod(c, field.modulus, field)


def _inv_mod(c, modulus, field):
    g, u, _ = poly.extended_gcd(c, modulus)
    if poly.degree(g) == 0:
        return _reduce(u, field)
    # c is a zero divisor modulo a reducible square-free modulus but does
    # not vanish at the generator: invert modulo the cofactor instead.
    cofactor = poly.div_mod(modulus, g)[0]
    return _inv_mod(poly.div_mod(c, cofactor)[1], cofactor, field)


class Scalar:
    """Common base for the three scalar representations."""

    __slots__ = ()

    def sign(self):
        raise NotImplementedError

    def enclosure(self):
        raise NotImplementedError

    def is_exact(self):
        return True

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (rational(1) / self) ** (-n)
        out = rational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


class RationalScalar(Scalar):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Fraction(value)

    def sign(self):
        v = self.value
        return (v > 0) - (v < 0)

    def enclosure(self):
        return self.value, self.value

    def __add__(self, other):
        if isinstance(other, RationalScalar):
            return RationalScalar(self.value + other.value)
        if isinstance(other, (int, Fraction)):
            return RationalScalar(self.value + other)
        if isinstance(other, Scalar):
            return other + self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return RationalScalar(-self.value)

    def __mul__(self, other):
        if isinstance(other, RationalScalar):
            return RationalScalar(self.value * other.value)
        if isinstance(other, (int, Fraction)):
            return RationalScalar(self.value * other)
        if isinstance(other, Scalar):
            return other * self
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RationalScalar):
            return RationalScalar(self.value / other.value)
        if isinstance(other, (int, Fraction)):
            return RationalScalar(self.value / Fraction(other))
        if isinstance(other, AlgebraicScalar):
            return AlgebraicScalar(other.field, (Fraction(self.value),)) / other
        if isinstance(other, IntervalScalar):
            return IntervalScalar(self.value, self.value) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalScalar(Fraction(other) / self.value)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, RationalScalar):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        if isinstance(other, AlgebraicScalar):
            return other == self
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return "RationalScalar(%s)" % self.value


class AlgebraicScalar(Scalar):
    """An element of a :class:`NumberField`, as a polynomial in the generator."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = tuple(Fraction(c) for c in _reduce(coeffs, field))

    def _coerce(self, other):
        """Coefficients of ``other`` in self's field, or None."""
        if isinstance(other, AlgebraicScalar):
            if other.field is self.field or self.field.same_root(other.field):
                return other.coeffs
            raise MalformedInput("operands live in different number fields")
        if isinstance(other, RationalScalar):
            return (other.value,)
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),)
        return None

    @staticmethod
    def _make(field, coeffs):
        coeffs = _reduce(coeffs, field)
        if poly.degree(coeffs) < 1:
            return RationalScalar(coeffs[0] if coeffs else 0)
        return AlgebraicScalar(field, coeffs)

    def sign(self):
        return _elem_sign(self.coeffs, self.field)

    def enclosure(self, eps=None):
        if eps is not None:
            eps = Fraction(eps)
        while True:
            lo, hi = self.field.enclosure()
            vlo, vhi = poly.evaluate_interval(self.coeffs, lo, hi)
            if eps is None or vhi - vlo <= eps or self.field._exact_root is not None:
                return vlo, vhi
            self.field.refine_once()

    def __add__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return self._make(self.field, poly.add(self.coeffs, oc))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicScalar(self.field, poly.neg(self.coeffs))

    def __mul__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return self._make(self.field, poly.mul(self.coeffs, oc))

    __rmul__ = __mul__

    def __truediv__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        if _elem_is_zero(oc, self.field):
            raise ZeroDivisionError("division by zero field element")
        inv = _elem_inverse(oc, self.field)
        return self._make(self.field, poly.mul(self.coeffs, inv))

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicScalar(self.field, (Fraction(other),)) / self
        return NotImplemented

    def __eq__(self, other):
        try:
            oc = self._coerce(other)
        except MalformedInput:
            return compare(self, other) is Ordering.EQ
        if oc is None:
            return NotImplemented
        return _elem_is_zero(poly.sub(self.coeffs, oc), self.field)

    __hash__ = None

    def annihilator(self):
        """Square-free integer polynomial vanishing at the value.

        This is the minimal polynomial whenever the field modulus is
        irreducible; for a reducible square-free modulus it may pick up
        factors from the other components, which is harmless for root
        isolation and comparison.
        """
        d = self.field.degree
        pivots = []  # (pivot index, vector, combination) rows in echelon form
        power = (Fraction(1),)
        for k in range(d + 1):
            vec = list(power) + [Fraction(0)] * (d - len(power))
            combo = [Fraction(0)] * (d + 1)
            combo[k] = Fraction(1)
            for pidx, pvec, pcombo in pivots:
                if vec[pidx] != 0:
                    f = vec[pidx]
                    vec = [a - f * b for a, b in zip(vec, pvec)]
                    combo = [a - f * b for a, b in zip(combo, pcombo)]
            nz = next((i for i, a in enumerate(vec) if a != 0), None)
            if nz is None:
                return poly.to_int_poly(poly.square_free_part(poly.trim(combo)))
            inv = 1 / vec[nz]
            vec = [a * inv for a in vec]
            combo = [a * inv for a in combo]
            pivots.append((nz, vec, combo))
            power = _reduce(poly.mul(power, self.coeffs), self.field)
        raise AssertionError("no dependency among field element powers")

    def isolating_data(self):
        """(annihilator, lo, hi) with exactly one root of it inside."""
        minpoly = self.annihilator()
        if poly.degree(minpoly) == 1:
            v = Fraction(-minpoly[0], minpoly[1])
            return minpoly, v, v
        chain = poly.sturm_chain(minpoly)
        while True:
            lo, hi = self.enclosure()
            if (
                poly.evaluate(minpoly, lo) != 0
                and poly.evaluate(minpoly, hi) != 0
                and poly.count_roots(chain, lo, hi) == 1
            ):
                return minpoly, lo, hi
            self.field.refine_once()

    def __repr__(self):
        return "AlgebraicScalar(%r, %r)" % (self.field, [str(c) for c in self.coeffs])


class IntervalScalar(Scalar):
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo = Fraction(lo)
        hi = Fraction(hi)
        if lo > hi:
            raise MalformedInput("interval lower endpoint exceeds upper")
        self.lo = lo
        self.hi = hi

    def is_exact(self):
        return self.lo == self.hi

    def sign(self):
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def enclosure(self):
        return self.lo, self.hi

    def width(self):
        return self.hi - self.lo

    def _coerce(self, other):
        if isinstance(other, IntervalScalar):
            return other
        if isinstance(other, RationalScalar):
            return IntervalScalar(other.value, other.value)
        if isinstance(other, (int, Fraction)):
            return IntervalScalar(other, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return IntervalScalar(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return IntervalScalar(-self.hi, -self.lo)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        cands = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return IntervalScalar(min(cands), max(cands))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("division by an interval containing zero")
        return self * IntervalScalar(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return IntervalScalar(other, other) / self
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, IntervalScalar):
            return self.lo == other.lo and self.hi == other.hi
        return NotImplemented

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return "IntervalScalar(%s, %s)" % (self.lo, self.hi)


def rational(num, den=1):
    return RationalScalar(Fraction(num, den))


def algebraic(modulus, lo, hi):
    """The root of ``modulus`` isolated by (lo, hi), as a scalar.

    Degree-one input demotes to the rational root itself.
    """
    mod = poly.to_int_poly(poly.square_free_part(poly.trim(modulus)))
    if poly.degree(mod) < 1:
        raise MalformedInput("modulus must be non-constant")
    if poly.degree(mod) == 1:
        return RationalScalar(Fraction(-mod[0], mod[1]))
    field = NumberField(mod, lo, hi)
    return AlgebraicScalar(field, (Fraction(0), Fraction(1)))


def interval(lo, hi):
    return IntervalScalar(lo, hi)


def floor_exact(x, budget=DEFAULT_REFINE_BUDGET):
    """Exact floor of a scalar.

    Algebraic values refine their isolating interval until an integer is
    excluded (after an exact test for being an integer); plain intervals
    that straddle an integer raise :class:`IndeterminateFloor` since they
    carry no refinement oracle.
    """
    if isinstance(x, RationalScalar):
        return _floor(x.value)
    if isinstance(x, IntervalScalar):
        flo = _floor(x.lo)
        if flo == _floor(x.hi) or x.lo == x.hi:
            return flo
        raise IndeterminateFloor("interval %r straddles an integer" % x)
    if isinstance(x, AlgebraicScalar):
        for _ in range(budget):
            lo, hi = x.enclosure()
            flo, fhi = _floor(lo), _floor(hi)
            if flo == fhi:
                return flo
            for k in range(flo + 1, fhi + 1):
                if x == k:
                    return k
            x.field.refine_once()
        raise IndeterminateFloor("floor refinement budget exhausted for %r" % x)
    raise MalformedInput("floor_exact expects a Scalar, got %r" % (x,))


def compare(x, y, budget=_SIGN_BUDGET):
    """Exact ordering of two scalars; INDETERMINATE only for fuzzy intervals."""
    if isinstance(x, (int, Fraction)):
        x = RationalScalar(x)
    if isinstance(y, (int, Fraction)):
        y = RationalScalar(y)
    if isinstance(x, IntervalScalar) or isinstance(y, IntervalScalar):
        # refine any algebraic side before conceding: INDETERMINATE should
        # only mean the fuzzy interval itself straddles the other value
        for _ in range(budget):
            xlo, xhi = x.enclosure()
            ylo, yhi = y.enclosure()
            if xhi < ylo:
                return Ordering.LT
            if yhi < xlo:
                return Ordering.GT
            if xlo == xhi == ylo == yhi:
                return Ordering.EQ
            progressed = False
            for side in (x, y):
                if (
                    isinstance(side, AlgebraicScalar)
                    and side.field._exact_root is None
                ):
                    side.field.refine_once()
                    progressed = True
            if not progressed:
                break
        return Ordering.INDETERMINATE
    if isinstance(x, AlgebraicScalar) and isinstance(y, AlgebraicScalar):
        if not (x.field is y.field or x.field.same_root(y.field)):
            return _compare_cross_field(x, y, budget)
    s = (x - y).sign()
    return Ordering(min(max(s, -1), 1))


def _compare_cross_field(x, y, budget):
    # Equality across two independently declared fields holds iff a common
    # root of the two annihilators sits where both enclosures shrink to.
    px = x.annihilator()
    py = y.annihilator()
    common = poly.to_int_poly(poly.gcd(px, py))
    chains = None
    if poly.degree(common) >= 1:
        chains = [poly.sturm_chain(p) for p in (px, py, common)]
        polys = (px, py, common)
    for _ in range(budget):
        xlo, xhi = x.enclosure()
        ylo, yhi = y.enclosure()
        if xhi < ylo:
            return Ordering.LT
        if yhi < xlo:
            return Ordering.GT
        if chains is not None:
            lo, hi = min(xlo, ylo), max(xhi, yhi)
            if all(
                poly.evaluate(p, lo) != 0 and poly.evaluate(p, hi) != 0
                for p in polys
            ):
                counts = [poly.count_roots(ch, lo, hi) for ch in chains]
                if counts[0] == 1 and counts[1] == 1 and counts[2] == 1:
                    return Ordering.EQ
                # counts settled without a shared root: the values differ,
                # so keep refining until the enclosures separate
        x.field.refine_once()
        y.field.refine_once()
    raise BudgetExceeded("cross-field comparison did not settle")


def refine(x, eps):
    """Tighten the enclosure of ``x`` to width <= eps where an oracle exists.

    Rational values are returned unchanged; algebraic values refine their
    field's root interval in place (a monotone cache) and are returned;
    plain intervals have nothing to refine against and come back as-is.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise MalformedInput("eps must be positive")
    if isinstance(x, AlgebraicScalar):
        x.enclosure(eps)
    return x


class ScalarVector:
    """An ordered tuple of scalars, used for (1, theta_1, ..., theta_{n-1})."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = tuple(
            RationalScalar(e) if isinstance(e, (int, Fraction)) else e for e in entries
        )
        if len(entries) < 2:
            raise MalformedInput("a scalar vector needs at least two entries")
        for e in entries:
            if not isinstance(e, Scalar):
                raise MalformedInput("vector entry %r is not a Scalar" % (e,))
        self.entries = entries

    @classmethod
    def coerce(cls, value):
        return value if isinstance(value, cls) else cls(value)

    @property
    def rank(self):
        return len(self.entries)

    def is_positive(self):
        """True/False when decidable, None when an interval straddles zero."""
        out = True
        for e in self.entries:
            s = e.sign()
            if s is None:
                out = None
            elif s <= 0:
                return False
        return out

    def normalized(self):
        """Divide through by the first entry so it becomes exactly 1."""
        head = self.entries[0]
        if isinstance(head, RationalScalar) and head.value == 1:
            return self
        return ScalarVector(tuple(e / head for e in self.entries))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other):
        if not isinstance(other, ScalarVector):
            return NotImplemented
        return len(self) == len(other) and all(
            compare(a, b) is Ordering.EQ for a, b in zip(self, other)
        )

    __hash__ = None

    def __repr__(self):
        return "ScalarVector(%r)" % (list(self.entries),)


def _fraction_to_json(f):
    f = Fraction(f)
    return [f.numerator, f.denominator]


def _fraction_from_json(obj):
    try:
        num, den = obj
        return Fraction(int(num), int(den))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise MalformedInput("bad rational pair %r" % (obj,)) from exc


def scalar_to_json(x):
    if isinstance(x, RationalScalar):
        return {"rat": _fraction_to_json(x.value)}
    if isinstance(x, AlgebraicScalar):
        if x.field._exact_root is not None:
            return {"rat": _fraction_to_json(poly.evaluate(x.coeffs, x.field._exact_root))}
        lo, hi = x.field.enclosure()
        body = {
            "poly": list(x.field.modulus),
            "lo": _fraction_to_json(lo),
            "hi": _fraction_to_json(hi),
        }
        # the bare form means "the isolated root itself"; anything else
        # carries its coordinates in the declared field
        if x.coeffs != (Fraction(0), Fraction(1)):
            body["coeffs"] = [_fraction_to_json(c) for c in x.coeffs]
        return {"alg": body}
    if isinstance(x, IntervalScalar):
        return {"ivl": {"lo": _fraction_to_json(x.lo), "hi": _fraction_to_json(x.hi)}}
    raise MalformedInput("cannot encode %r" % (x,))


def scalar_from_json(obj):
    """Decode a scalar; accepts {"rat": ...} objects or ["rat", ...] pairs."""
    if isinstance(obj, (list, tuple)) and len(obj) == 2 and isinstance(obj[0], str):
        obj = {obj[0]: obj[1]}
    if isinstance(obj, int):
        return rational(obj)
    if isinstance(obj, str):
        return RationalScalar(Fraction(obj))
    if not isinstance(obj, dict) or len(obj) != 1:
        raise MalformedInput("bad scalar encoding %r" % (obj,))
    (tag, body), = obj.items()
    if tag == "rat":
        return RationalScalar(_fraction_from_json(body))
    if tag == "alg":
        try:
            mod = [int(c) for c in body["poly"]]
            lo = _fraction_from_json(body["lo"])
            hi = _fraction_from_json(body["hi"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput("bad algebraic encoding %r" % (obj,)) from exc
        if "coeffs" in body:
            try:
                coeffs = [_fraction_from_json(c) for c in body["coeffs"]]
            except (TypeError, ValueError) as exc:
                raise MalformedInput("bad coeffs in %r" % (obj,)) from exc
            field = NumberField(mod, lo, hi)
            return AlgebraicScalar._make(field, tuple(coeffs))
        return algebraic(mod, lo, hi)
    if tag == "ivl":
        try:
            return IntervalScalar(
                _fraction_from_json(body["lo"]), _fraction_from_json(body["hi"])
            )
        except (KeyError, TypeError) as exc:
            raise MalformedInput("bad interval encoding %r" % (obj,)) from exc
    raise MalformedInput("unknown scalar tag %r" % tag)


def vector_to_json(vec):
    return [scalar_to_json(e) for e in ScalarVector.coerce(vec)]


def vector_from_json(obj):
    if not isinstance(obj, (list, tuple)):
        raise MalformedInput("theta must be a JSON array")
    entries = [scalar_from_json(e) for e in obj]
    # entries decoded from identical field declarations should share one
    # NumberField object, so that arithmetic between them is direct
    shared = {}
    for i, e in enumerate(entries):
        if isinstance(e, AlgebraicScalar):
            lo, hi = e.field.enclosure()
            key = (e.field.modulus, lo, hi)
            if key in shared:
                entries[i] = AlgebraicScalar(shared[key], e.coeffs)
            else:
                shared[key] = e.field
    return ScalarVector(entries)
