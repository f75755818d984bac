"""Pseudo-lattices over a declared coordinate frame and their projective
classes.

Real numbers are replaced by rational coordinate vectors over a frame of
declared Q-linearly independent symbols, which makes Z-module equality
decidable by Hermite normal form.  A frame may optionally declare itself
a power basis of a real number field (a modulus polynomial plus a root
interval); that unlocks exact division and sign decisions, which plain
symbolic frames cannot offer.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional

from . import intmat
from . import polynomials as poly
from .errors import (
    FrameMismatch,
    InvalidGenus,
    MalformedInput,
    NonInvertibleLeadingEntry,
)
from .scalars import NumberField, _elem_inverse, _elem_sign


class CoordinateFrame:
    """Declared basis of Q-independent reals, optionally a field power basis.

    With a modulus, the symbols are read as (1, g, g^2, ...) for g the
    isolated root, so the first symbol always denotes the real number 1.
    Without one, the user asserts independence and a symbol literally
    named "1" (if any) is taken to denote unity.
    """

    __slots__ = ("symbols", "field")

    def __init__(self, symbols, modulus=None, root=None):
        symbols = tuple(str(s) for s in symbols)
        if len(symbols) < 1:
            raise MalformedInput("frame needs at least one symbol")
        if len(set(symbols)) != len(symbols):
            raise MalformedInput("frame symbols must be distinct")
        field = None
        if modulus is not None:
            if root is None:
                raise MalformedInput("a field frame needs a root interval")
            field = NumberField(modulus, root[0], root[1])
            if field.degree != len(symbols):
                raise MalformedInput(
                    "frame has %d symbols but the field has degree %d"
                    % (len(symbols), field.degree)
                )
        self.symbols = symbols
        self.field = field

    @property
    def dimension(self):
        return len(self.symbols)

    @property
    def unit_index(self):
        if self.field is not None:
            return 0
        try:
            return self.symbols.index("1")
        except ValueError:
            return None

    def compatible(self, other):
        if self.symbols != other.symbols:
            return False
        if (self.field is None) != (other.field is None):
            return False
        if self.field is not None and not self.field.same_root(other.field):
            return False
        return True

    def sign_of(self, coords):
        """Exact sign of a coordinate vector's value, None if undecidable."""
        if self.field is None:
            return None
        return _elem_sign(poly.trim(coords), self.field)

    def __repr__(self):
        return "CoordinateFrame(%r%s)" % (
            list(self.symbols),
            "" if self.field is None else ", field=%r" % self.field,
        )


def _as_coords(vec, dim):
    coords = tuple(Fraction(x) for x in vec)
    if len(coords) != dim:
        raise MalformedInput("coordinate vector has wrong length")
    return coords


def _rank_of(rows):
    work = [list(r) for r in rows]
    rank = 0
    cols = len(work[0]) if work else 0
    for c in range(cols):
        pivot = next((i for i in range(rank, len(work)) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        pv = work[rank][c]
        for i in range(len(work)):
            if i != rank and work[i][c] != 0:
                f = Fraction(work[i][c], 1) / pv
                work[i] = [a - f * b for a, b in zip(work[i], work[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class PseudoLattice:
    """Rank-n Z-module in the frame's coordinate space, given by the images
    lambda_1, ..., lambda_n of a basis."""

    frame: CoordinateFrame
    vectors: tuple
    positive: Optional[bool] = None

    def __post_init__(self):
        vecs = tuple(_as_coords(v, self.frame.dimension) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        if len(vecs) < 2:
            raise MalformedInput("a pseudo-lattice needs rank at least 2")
        if all(x == 0 for x in vecs[0]):
            raise MalformedInput("lambda_1 must be non-zero")
        if _rank_of(vecs) != len(vecs):
            raise MalformedInput("lattice vectors are not Q-linearly independent")
        if self.positive is None and self.frame.field is not None:
            signs = [self.frame.sign_of(v) for v in vecs]
            object.__setattr__(self, "positive", all(s > 0 for s in signs))

    @property
    def rank(self):
        return len(self.vectors)


@dataclass(frozen=True)
class ProjectivePseudoLattice:
    """A pseudo-lattice normalized so its first vector is the real number 1."""

    frame: CoordinateFrame
    vectors: tuple

    def __post_init__(self):
        vecs = tuple(_as_coords(v, self.frame.dimension) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        if len(vecs) < 2:
            raise MalformedInput("rank must be at least 2")
        unit = self.frame.unit_index
        if unit is None:
            raise MalformedInput("frame has no unit symbol to normalize against")
        expected = tuple(
            Fraction(1) if i == unit else Fraction(0)
            for i in range(self.frame.dimension)
        )
        if vecs[0] != expected:
            raise MalformedInput("first entry of a projective lattice must be 1")

    @property
    def rank(self):
        return len(self.vectors)


def act(a, pl):
    """Unimodular change of basis: the j-th new vector is sum_i a[i][j] * lambda_i."""
    intmat.check_unimodular(a)
    n = pl.rank
    if len(a) != n or any(len(r) != n for r in a):
        raise MalformedInput("matrix size does not match lattice rank")
    d = pl.frame.dimension
    new = []
    for j in range(n):
        coords = [Fraction(0)] * d
        for i in range(n):
            c = a[i][j]
            if c:
                coords = [x + c * y for x, y in zip(coords, pl.vectors[i])]
        new.append(tuple(coords))
    return PseudoLattice(pl.frame, tuple(new), positive=None)


def scale(c, pl):
    """Multiply every vector by a positive rational."""
    c = Fraction(c)
    if c <= 0:
        raise MalformedInput("scale factor must be positive")
    return PseudoLattice(
        pl.frame,
        tuple(tuple(c * x for x in v) for v in pl.vectors),
        positive=pl.positive,
    )


def project(pl):
    """Divide out lambda_1, collapsing the positive-scaling kernel.

    Works when lambda_1 is a rational multiple of the unit symbol, or over
    a field frame where exact division is always available.
    """
    frame = pl.frame
    head = pl.vectors[0]
    unit = frame.unit_index
    if frame.field is not None:
        inv = _elem_inverse(poly.trim(head), frame.field)
        d = frame.dimension
        new = []
        for v in pl.vectors:
            prod = poly.div_mod(poly.mul(poly.trim(v), inv), frame.field.modulus)[1]
            coords = list(prod) + [Fraction(0)] * (d - len(prod))
            new.append(tuple(Fraction(x) for x in coords))
        return ProjectivePseudoLattice(frame, tuple(new))
    if unit is not None and all(x == 0 for i, x in enumerate(head) if i != unit):
        c = head[unit]
        if c == 0:
            raise NonInvertibleLeadingEntry("lambda_1 is zero")
        return ProjectivePseudoLattice(
            frame, tuple(tuple(x / c for x in v) for v in pl.vectors)
        )
    raise NonInvertibleLeadingEntry(
        "lambda_1 is not a rational multiple of the unit symbol and the frame "
        "declares no field structure"
    )


def _require_common_frame(p, q):
    if not p.frame.compatible(q.frame):
        raise FrameMismatch("lattices live over different frames")
    if p.rank != q.rank:
        raise FrameMismatch("lattices have different ranks")


def _integerize_per_column(vec_rows, scales):
    return [
        [int(x * s) for x, s in zip(row, scales)]
        for row in vec_rows
    ]


def _column_scales(*row_sets):
    cols = len(row_sets[0][0])
    scales = []
    for c in range(cols):
        denoms = [row[c].denominator for rows in row_sets for row in rows]
        scales.append(lcm(*denoms) if denoms else 1)
    return scales


@dataclass(frozen=True)
class PlIsomorphism:
    isomorphic: bool
    witness: Optional[list] = None

    def __bool__(self):
        return self.isomorphic


@dataclass(frozen=True)
class PplIsomorphism:
    isomorphic: bool
    scale: Optional[Fraction] = None
    witness: Optional[list] = None

    def __bool__(self):
        return self.isomorphic


def pl_isomorphic(p, q):
    """Equality of the two Z-modules, with a unimodular witness T such
    that act(T, p) == q when they coincide."""
    _require_common_frame(p, q)
    scales = _column_scales(p.vectors, q.vectors)
    lp = _integerize_per_column(p.vectors, scales)
    lq = _integerize_per_column(q.vectors, scales)
    hp, up = intmat.hnf(lp)
    hq, uq = intmat.hnf(lq)
    if not intmat.mat_eq(hp, hq):
        return PlIsomorphism(False)
    w = intmat.mat_mul(intmat.inverse_unimodular(uq), up)
    return PlIsomorphism(True, intmat.transpose(w))


def ppl_isomorphic(p, q):
    """Equality up to a positive rational scale and unimodular basis change.

    Returns the scale c and witness T with q = c * act(T, p); the scale is
    read off matching Hermite pivots.
    """
    _require_common_frame(p, q)
    dp = lcm(*[x.denominator for row in p.vectors for x in row])
    dq = lcm(*[x.denominator for row in q.vectors for x in row])
    lp = [[int(x * dp) for x in row] for row in p.vectors]
    lq = [[int(x * dq) for x in row] for row in q.vectors]
    hp, up = intmat.hnf(lp)
    hq, uq = intmat.hnf(lq)
    ratio = None
    for rp, rq in zip(hp, hq):
        for a, b in zip(rp, rq):
            if (a == 0) != (b == 0):
                return PplIsomorphism(False)
            if a != 0 and ratio is None:
                ratio = Fraction(b, a)
    if ratio is None or ratio <= 0:
        return PplIsomorphism(False)
    for rp, rq in zip(hp, hq):
        if any(Fraction(b, 1) != ratio * a for a, b in zip(rp, rq)):
            return PplIsomorphism(False)
    c = ratio * Fraction(dp, dq)
    w = intmat.mat_mul(intmat.inverse_unimodular(uq), up)
    return PplIsomorphism(True, c, intmat.transpose(w))


def pl_contains(p, q):
    """Is the module of q contained in the module of p?"""
    _require_common_frame(p, q)
    scales = _column_scales(p.vectors, q.vectors)
    lp = _integerize_per_column(p.vectors, scales)
    lq = _integerize_per_column(q.vectors, scales)
    hp, _ = intmat.hnf(lp)
    stacked, _ = intmat.hnf(lp + lq)
    return intmat.nonzero_rows(stacked) == intmat.nonzero_rows(hp)


def genus_rank(g):
    """Rank of the coordinate vector attached to a genus-g surface."""
    g = int(g)
    if g < 1:
        raise InvalidGenus("genus must be at least 1, got %d" % g)
    return 2 if g == 1 else 6 * g - 6


def _fraction_pair(x):
    f = Fraction(x)
    return [f.numerator, f.denominator]


def frame_to_json(frame):
    out = {"frame": list(frame.symbols)}
    if frame.field is not None:
        lo, hi = frame.field.enclosure()
        out["modulus"] = list(frame.field.modulus)
        out["root"] = {"lo": _fraction_pair(lo), "hi": _fraction_pair(hi)}
    return out


def frame_from_json(obj):
    symbols = obj.get("frame")
    if not symbols:
        raise MalformedInput("missing frame symbols")
    modulus = obj.get("modulus")
    root = None
    if modulus is not None:
        r = obj.get("root")
        if not r:
            raise MalformedInput("field frame JSON needs a root interval")
        root = (
            Fraction(int(r["lo"][0]), int(r["lo"][1])),
            Fraction(int(r["hi"][0]), int(r["hi"][1])),
        )
    return CoordinateFrame(symbols, modulus=modulus, root=root)


def lattice_to_json(pl):
    out = frame_to_json(pl.frame)
    out["vectors"] = [[_fraction_pair(x) for x in row] for row in pl.vectors]
    return out


def _vectors_from_json(obj):
    rows = obj.get("vectors")
    if not isinstance(rows, list):
        raise MalformedInput("missing lattice vectors")
    return tuple(
        tuple(Fraction(int(x[0]), int(x[1])) for x in row) for row in rows
    )


def lattice_from_json(obj):
    return PseudoLattice(frame_from_json(obj), _vectors_from_json(obj))


def projective_from_json(obj):
    return ProjectivePseudoLattice(frame_from_json(obj), _vectors_from_json(obj))
