"""The Euclidean algorithm, regular continued fractions and the
Jacobi-Perron algorithm over exact scalars.

The expansion of a positive vector (1, x_1, ..., x_{n-1}) emits one digit
block b = (floor x_1, ..., floor x_{n-1}) per step and moves to the state
(1, f_2/f_1, ..., f_{n-1}/f_1, 1/f_1), where f_i are the fractional
parts.  A fractional part f_1 = 0 terminates the expansion (this is the
multidimensional shape of a rational input).  Each step has a companion
unimodular matrix; the running product of those matrices reconstructs the
input vector from any later state, exactly, which is the contract most of
the tests in this package lean on.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import intmat
from .errors import (
    DepthExceeded,
    EmptyInput,
    IndeterminateFloor,
    MalformedInput,
    NonPositiveEntry,
    NonPositiveState,
)
from .scalars import (
    AlgebraicScalar,
    Ordering,
    RationalScalar,
    Scalar,
    ScalarVector,
    compare,
    floor_exact,
    rational,
    vector_from_json,
    vector_to_json,
)

TERMINATED = "terminated"
TRUNCATED = "truncated"
PERIODIC = "periodic"


def _as_digit_block(b, rank=None):
    block = tuple(int(x) for x in b)
    if not block:
        raise MalformedInput("digit block must be non-empty")
    if any(x < 0 for x in block):
        raise MalformedInput("digit entries must be non-negative")
    if rank is not None and len(block) != rank - 1:
        raise MalformedInput(
            "digit block %r does not match rank %d" % (block, rank)
        )
    return block


def primitive_period(period):
    """Shortest block sequence whose repetition generates ``period``."""
    period = list(period)
    n = len(period)
    for q in range(1, n + 1):
        if n % q == 0 and period == period[:q] * (n // q):
            return tuple(period[:q])
    return tuple(period)


@dataclass(frozen=True)
class Tail:
    """Tail tag of an expansion: terminated, truncated, or periodic."""

    kind: str
    preperiod: Optional[int] = None
    period: Optional[tuple] = None

    @staticmethod
    def terminated():
        return Tail(TERMINATED)

    @staticmethod
    def truncated():
        return Tail(TRUNCATED)

    @staticmethod
    def periodic(preperiod, period):
        period = tuple(_as_digit_block(b) for b in period)
        if not period:
            raise MalformedInput("periodic tail needs a non-empty period")
        if primitive_period(period) != period:
            raise MalformedInput("period %r is not primitive" % (period,))
        return Tail(PERIODIC, int(preperiod), period)


@dataclass(frozen=True)
class Expansion:
    """A finite or eventually-periodic Jacobi-Perron digit stream.

    ``blocks`` are the explicitly stored digit blocks.  A periodic tail
    declares the stream to continue as blocks[:preperiod] + period
    repeated forever; the stored blocks must agree with that declaration.
    ``states`` (when present) hold the exact state after each step, and a
    terminated expansion records the final fractional ``residual``.
    """

    rank: int
    blocks: tuple
    tail: Tail
    theta: Optional[ScalarVector] = None
    states: Optional[tuple] = None
    residual: Optional[tuple] = None

    def __post_init__(self):
        if self.rank < 2:
            raise MalformedInput("rank must be at least 2")
        object.__setattr__(
            self,
            "blocks",
            tuple(_as_digit_block(b, self.rank) for b in self.blocks),
        )
        if self.tail.kind == PERIODIC:
            p, per = self.tail.preperiod, self.tail.period
            if p < 0 or p > len(self.blocks):
                raise MalformedInput("preperiod outside stored blocks")
            for b in per:
                _as_digit_block(b, self.rank)
            for i in range(p, len(self.blocks)):
                if self.blocks[i] != per[(i - p) % len(per)]:
                    raise MalformedInput(
                        "stored blocks disagree with the declared period"
                    )

    @property
    def depth(self):
        return len(self.blocks)

    def available_depth(self):
        """Stored depth, or infinity for a periodic tail."""
        return math.inf if self.tail.kind == PERIODIC else len(self.blocks)

    def block_at(self, i):
        if i < len(self.blocks):
            return self.blocks[i]
        if self.tail.kind == PERIODIC:
            p, per = self.tail.preperiod, self.tail.period
            return per[(i - p) % len(per)]
        raise DepthExceeded("block %d beyond available depth" % i)

    def realize(self, depth):
        """First ``depth`` blocks (cycling a periodic tail as needed)."""
        if self.tail.kind != PERIODIC:
            depth = min(depth, len(self.blocks))
        return [self.block_at(i) for i in range(depth)]

    def is_exact_tail(self):
        return self.tail.kind in (TERMINATED, PERIODIC)


def step_matrix(b):
    """The unimodular companion matrix of one digit block.

    First row (0, ..., 0, 1); row i+1 is the i-th unit row with b_i
    appended in the last column.  Its determinant is (-1)^(n+1).
    """
    b = _as_digit_block(b)
    n = len(b) + 1
    m = [[0] * n for _ in range(n)]
    m[0][n - 1] = 1
    for i, digit in enumerate(b):
        m[i + 1][i] = 1
        m[i + 1][n - 1] = digit
    return m


def scalar_mat_vec(m, vec):
    """Integer matrix times scalar vector."""
    out = []
    for row in m:
        acc = rational(0)
        for c, x in zip(row, vec):
            if c:
                acc = acc + x * c
        out.append(acc)
    return tuple(out)


def projectively_equal(u, v):
    """Exact proportionality of two scalar vectors via cross products."""
    if len(u) != len(v):
        return False
    u = tuple(u)
    v = tuple(v)
    for i in range(1, len(u)):
        if not (u[i] * v[0]) == (v[i] * u[0]):
            return False
    return True


def _check_state(state):
    # Interior states may carry exact zeros (a coordinate whose fractional
    # part vanished on an earlier step); only negative or uncertifiable
    # entries are rejected here.  Strict positivity of the original input
    # is enforced by jpa_expand.
    state = ScalarVector.coerce(state)
    if compare(state[0], rational(1)) is not Ordering.EQ:
        raise MalformedInput("state vector must be normalized to leading 1")
    for x in state:
        s = x.sign()
        if s is None:
            raise NonPositiveState("cannot certify the sign of %r" % (x,))
        if s < 0:
            raise NonPositiveState("state entry %r is negative" % (x,))
    return state


def jpa_step(state):
    """One Jacobi-Perron step.

    Returns (digit block, next state); the next state is None when the
    first fractional part vanishes and the expansion terminates.
    """
    state = _check_state(state)
    digits = tuple(floor_exact(x) for x in state.entries[1:])
    fracs = [x - b for x, b in zip(state.entries[1:], digits)]
    s0 = fracs[0].sign()
    if s0 is None:
        raise IndeterminateFloor("cannot decide termination of %r" % (state,))
    if s0 == 0:
        return digits, None
    head = fracs[0]
    nxt = [rational(1)]
    nxt.extend(f / head for f in fracs[1:])
    nxt.append(rational(1) / head)
    return digits, ScalarVector(nxt)


def _terminal_residual(state, digits):
    fracs = [x - b for x, b in zip(state.entries[1:], digits)]
    return tuple(fracs + [rational(1)])


def jpa_expand(theta, max_depth, keep_states=True):
    """Expand a positive vector for up to ``max_depth`` digit blocks."""
    vec = ScalarVector.coerce(theta)
    pos = vec.is_positive()
    if pos is None:
        raise NonPositiveState("cannot certify positivity of the input vector")
    if not pos:
        raise NonPositiveState("input vector must be strictly positive")
    state = vec.normalized()
    source = state
    states = [state]
    blocks = []
    tail = Tail.truncated()
    residual = None
    for _ in range(max_depth):
        digits, nxt = jpa_step(state)
        blocks.append(digits)
        if nxt is None:
            tail = Tail.terminated()
            residual = _terminal_residual(state, digits)
            break
        state = nxt
        states.append(state)
    return Expansion(
        rank=source.rank,
        blocks=tuple(blocks),
        tail=tail,
        theta=source,
        states=tuple(states) if keep_states else None,
        residual=residual,
    )


def regular_cf(x, max_depth):
    """Regular continued fraction of a positive scalar, as a rank-2 expansion.

    This is the classical floor/reciprocal loop, deliberately independent
    of jpa_expand; at rank 2 the two must agree digit for digit, and the
    test suite holds them to that.
    """
    if isinstance(x, (int, Fraction)):
        x = rational(x)
    if not isinstance(x, Scalar):
        raise MalformedInput("regular_cf expects a scalar")
    s = x.sign()
    if s is None:
        raise NonPositiveState("cannot certify positivity of %r" % (x,))
    if s <= 0:
        raise NonPositiveState("regular_cf needs a positive value")
    source = ScalarVector([rational(1), x])
    states = [source]
    blocks = []
    tail = Tail.truncated()
    residual = None
    cur = x
    for _ in range(max_depth):
        b = floor_exact(cur)
        blocks.append((b,))
        frac = cur - b
        sf = frac.sign()
        if sf is None:
            raise IndeterminateFloor("cannot decide termination of %r" % (cur,))
        if sf == 0:
            tail = Tail.terminated()
            residual = (frac, rational(1))
            break
        cur = rational(1) / frac
        states.append(ScalarVector([rational(1), cur]))
    return Expansion(
        rank=2,
        blocks=tuple(blocks),
        tail=tail,
        theta=source,
        states=tuple(states),
        residual=residual,
    )


def euclid_chain(a, b):
    """Remainder-chain gcd of two positive integers with its quotients."""
    if a <= 0 or b <= 0:
        raise NonPositiveEntry("inputs must be positive")
    quotients = []
    while b:
        quotients.append(a // b)
        a, b = b, a % b
    return a, quotients


def euclid_gcd(values):
    """Gcd of two or more positive integers.

    The two-argument case is the classical remainder chain; longer inputs
    run the integer form of the Jacobi-Perron step (reduce every entry
    modulo the head, then rotate the head to the back) until a single
    value survives.
    """
    vals = [int(v) for v in values]
    if len(vals) < 2:
        raise EmptyInput("need at least two integers")
    if any(v <= 0 for v in vals):
        raise NonPositiveEntry("all entries must be positive")
    if len(vals) == 2:
        return euclid_chain(vals[0], vals[1])[0]
    while len(vals) > 1:
        while vals[0] != 0:
            head = vals[0]
            vals = [v % head for v in vals[1:]] + [head]
        vals = [v for v in vals if v != 0]
    return vals[0]


def prefix_product(exp, k):
    """Product of the first ``k`` step matrices."""
    if k < 0 or (k > exp.available_depth()):
        raise DepthExceeded("depth %d beyond available expansion" % k)
    out = intmat.identity(exp.rank)
    for i in range(k):
        out = intmat.mat_mul(out, step_matrix(exp.block_at(i)))
    return out


def convergent(exp, k, bound_eps=Fraction(1, 10**15)):
    """k-th convergent column with an optional exact error bound.

    Returns (integer vector, bound); the bound is a rational upper bound
    on the sup-norm distance between the normalized convergent and the
    stored source vector, or None when no exact source is available or
    the convergent cannot be normalized.
    """
    p = prefix_product(exp, k)
    col = [row[-1] for row in p]
    bound = None
    if (
        exp.theta is not None
        and col[0] != 0
        and all(e.is_exact() for e in exp.theta)
    ):
        bound = Fraction(0)
        for ci, ti in zip(col, exp.theta):
            lo, hi = _refined_enclosure(ti, bound_eps)
            c = Fraction(ci, col[0])
            bound = max(bound, abs(c - lo), abs(c - hi))
    return col, bound


def _refined_enclosure(x, eps):
    if isinstance(x, AlgebraicScalar):
        return x.enclosure(eps)
    return x.enclosure()


def canonical_periodic(preperiod_blocks, period):
    """Minimal preperiod and primitive period describing the same stream."""
    pre = [tuple(b) for b in preperiod_blocks]
    per = list(primitive_period([tuple(b) for b in period]))
    while pre and pre[-1] == per[-1]:
        per = [per[-1]] + per[:-1]
        pre.pop()
    return pre, per


@dataclass(frozen=True)
class PeriodVerdict:
    """Outcome of a periodicity search.

    ``kind`` is "terminated", "periodic" or "aperiodic_up_to".  Certified
    verdicts come from exact state recurrence (or exact termination);
    uncertified ones only say what the searched depth showed.
    """

    kind: str
    depth: int
    preperiod: Optional[int] = None
    period: Optional[tuple] = None
    certified: bool = False
    note: str = ""
    expansion: Optional[Expansion] = None

    @property
    def is_periodic(self):
        return self.kind == PERIODIC


def _find_recurrence(states, candidate, exact_hash):
    if exact_hash is not None:
        key = tuple(e.value for e in candidate.entries)
        return exact_hash.get(key)
    for j, st in enumerate(states):
        if all(
            compare(a, b) is Ordering.EQ for a, b in zip(st.entries, candidate.entries)
        ):
            return j
    return None


def _reduce_state_period(blocks, states, j, p):
    """Shrink a state-certified period to its primitive digit period when
    the shorter product still fixes the entry state exactly."""
    window = list(blocks[j:j + p])
    for q in range(1, p):
        if p % q or window != window[:q] * (p // q):
            continue
        m = intmat.identity(len(window[0]) + 1)
        for b in window[:q]:
            m = intmat.mat_mul(m, step_matrix(b))
        if projectively_equal(scalar_mat_vec(m, states[j].entries), states[j].entries):
            return q
    return p


def detect_period(subject, max_preperiod=16, max_period=16):
    """Certified periodicity detection for exact vectors and expansions.

    For an exact (rational/algebraic) vector the verdict rests on exact
    recurrence of the expansion state, which also certifies the primitive
    period.  Terminated means the input was rationally dependent.  When
    nothing recurs within the searched depth the verdict is an honest
    "aperiodic up to depth", never a certificate.
    """
    if isinstance(subject, Expansion):
        return _detect_period_expansion(subject, max_preperiod, max_period)
    vec = ScalarVector.coerce(subject)
    depth_budget = max_preperiod + max_period
    exact_entries = all(e.is_exact() for e in vec.entries)
    state = vec.normalized()
    states = [state]
    exact_hash = None
    if all(isinstance(e, RationalScalar) for e in state.entries):
        exact_hash = {tuple(e.value for e in state.entries): 0}
    blocks = []
    for k in range(depth_budget):
        try:
            digits, nxt = jpa_step(state)
        except IndeterminateFloor:
            return PeriodVerdict(
                kind="aperiodic_up_to",
                depth=k,
                certified=False,
                note="floor became indeterminate; interval data exhausted",
            )
        blocks.append(digits)
        if nxt is None:
            residual = _terminal_residual(state, digits)
            exp = Expansion(
                rank=vec.rank,
                blocks=tuple(blocks),
                tail=Tail.terminated(),
                theta=states[0],
                states=tuple(states),
                residual=residual,
            )
            return PeriodVerdict(
                kind=TERMINATED,
                depth=k + 1,
                certified=exact_entries,
                note="expansion terminated (rationally dependent input)",
                expansion=exp,
            )
        if exact_entries:
            j = _find_recurrence(states, nxt, exact_hash)
            if j is not None:
                p = _reduce_state_period(blocks, states, j, k + 1 - j)
                period = tuple(blocks[j:j + p])
                states_full = states + [nxt]
                exp = Expansion(
                    rank=vec.rank,
                    blocks=tuple(blocks[:j + p]),
                    tail=Tail.periodic(j, period),
                    theta=states[0],
                    states=tuple(states_full[:j + p + 1]),
                    residual=None,
                )
                return PeriodVerdict(
                    kind=PERIODIC,
                    depth=k + 1,
                    preperiod=j,
                    period=period,
                    certified=True,
                    note="state recurrence certified exactly",
                    expansion=exp,
                )
        state = nxt
        states.append(state)
        if exact_hash is not None:
            exact_hash[tuple(e.value for e in state.entries)] = len(states) - 1
    return PeriodVerdict(
        kind="aperiodic_up_to",
        depth=depth_budget,
        certified=False,
        note="no exact recurrence within the searched depth",
    )


def _detect_period_expansion(exp, max_preperiod, max_period):
    if exp.tail.kind == TERMINATED:
        return PeriodVerdict(
            kind=TERMINATED,
            depth=exp.depth,
            certified=True,
            note="expansion carries a terminated tag",
            expansion=exp,
        )
    if exp.tail.kind == PERIODIC:
        pre, per = canonical_periodic(
            exp.blocks[:exp.tail.preperiod], exp.tail.period
        )
        return PeriodVerdict(
            kind=PERIODIC,
            depth=exp.depth,
            preperiod=len(pre),
            period=tuple(per),
            certified=True,
            note="expansion carries a periodic tag",
            expansion=exp,
        )
    if exp.theta is not None and all(e.is_exact() for e in exp.theta):
        return detect_period(exp.theta, max_preperiod, max_period)
    return PeriodVerdict(
        kind="aperiodic_up_to",
        depth=exp.depth,
        certified=False,
        note="truncated digit data cannot certify periodicity",
    )


@dataclass(frozen=True)
class ConvergenceReport:
    """Projective contraction diagnostic for the partial matrix products."""

    depth: int
    diameters: tuple
    verdict: str
    threshold: float

    CONTRACTING = "contracting"
    NON_CONTRACTING = "non_contracting"
    INCONCLUSIVE = "inconclusive"


def _hilbert_diameter(m):
    """Largest Hilbert projective distance between column pairs of a
    non-negative matrix; infinite when supports differ."""
    n = len(m)
    cols = [[m[i][j] for i in range(n)] for j in range(n)]
    worst = 0.0
    for a in range(n):
        for b in range(a + 1, n):
            u, v = cols[a], cols[b]
            if any((x == 0) != (y == 0) for x, y in zip(u, v)):
                return math.inf
            r1 = max((Fraction(x, y) for x, y in zip(u, v) if y), default=None)
            r2 = max((Fraction(y, x) for x, y in zip(u, v) if x), default=None)
            if r1 is None or r2 is None:
                continue
            prod = r1 * r2
            d = math.log(prod.numerator) - math.log(prod.denominator)
            worst = max(worst, d)
    return worst


def convergence_diagnostic(exp, threshold=1e-8, depth=None):
    """Per-depth projective diameters of the partial products.

    Contracting when the final diameter drops below ``threshold``;
    non-contracting when positivity is structurally blocked (the zero
    pattern of the product cycles without ever filling in).
    """
    if depth is None:
        if exp.tail.kind == PERIODIC:
            depth = exp.tail.preperiod + 3 * len(exp.tail.period)
            depth = max(depth, exp.depth)
        else:
            depth = exp.depth
    depth = int(min(depth, exp.available_depth()))
    if depth < 1:
        return ConvergenceReport(0, (), ConvergenceReport.INCONCLUSIVE, threshold)
    diameters = []
    patterns = []
    p = intmat.identity(exp.rank)
    for i in range(depth):
        p = intmat.mat_mul(p, step_matrix(exp.block_at(i)))
        diameters.append(_hilbert_diameter(p))
        patterns.append(tuple(tuple(x != 0 for x in row) for row in p))
    verdict = ConvergenceReport.INCONCLUSIVE
    if diameters[-1] <= threshold:
        verdict = ConvergenceReport.CONTRACTING
    elif math.isinf(diameters[-1]) and patterns[-1] in patterns[:-1]:
        verdict = ConvergenceReport.NON_CONTRACTING
    return ConvergenceReport(depth, tuple(diameters), verdict, threshold)


def expansion_to_json(exp, include_theta=True):
    tail = {"kind": exp.tail.kind}
    if exp.tail.kind == PERIODIC:
        tail["preperiod"] = exp.tail.preperiod
        tail["period"] = [list(b) for b in exp.tail.period]
    out = {
        "rank": exp.rank,
        "blocks": [list(b) for b in exp.blocks],
        "tail": tail,
    }
    if include_theta and exp.theta is not None:
        out["theta"] = vector_to_json(exp.theta)
    return out


def expansion_from_json(obj):
    if not isinstance(obj, dict):
        raise MalformedInput("expansion must be a JSON object")
    try:
        rank = int(obj["rank"])
        blocks = [tuple(int(x) for x in b) for b in obj["blocks"]]
        tail_obj = obj["tail"]
        kind = tail_obj["kind"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput("bad expansion encoding: %s" % exc) from exc
    if kind == TERMINATED:
        tail = Tail.terminated()
    elif kind == TRUNCATED:
        tail = Tail.truncated()
    elif kind == PERIODIC:
        try:
            tail = Tail.periodic(
                tail_obj["preperiod"],
                [tuple(int(x) for x in b) for b in tail_obj["period"]],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput("bad periodic tail: %s" % exc) from exc
    else:
        raise MalformedInput("unknown tail kind %r" % kind)
    theta = None
    if obj.get("theta") is not None:
        theta = vector_from_json(obj["theta"])
    return Expansion(rank=rank, blocks=tuple(blocks), tail=tail, theta=theta)
