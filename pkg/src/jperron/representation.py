"""Matrix representations of groups acting on expansion vectors.

Given an exact positive vector (1, theta) and named generators acting by
unimodular matrices (or by explicitly supplied digit streams), every image
vector is expanded, the streams are aligned on their maximal common tail,
and each generator is assigned the unimodular quotient of prefix products

    A_g = B(b_g^(1)) ... B(b_g^(p_g)) * (B(b^(1)) ... B(b^(p)))^{-1},

where p_g and p are the aligned prefix lengths of the generator's stream
and of the base stream.  The tail-entry state theta_max is kept along with
the matrices so every claim (image reconstruction, fixed points, the
aperiodicity hypothesis behind faithfulness) can be re-checked exactly and
reported instead of assumed.
"""

from dataclasses import dataclass
from typing import Optional

from . import intmat
from .cf import (
    PERIODIC,
    TERMINATED,
    TRUNCATED,
    Expansion,
    Tail,
    canonical_periodic,
    detect_period,
    expansion_from_json,
    jpa_expand,
    prefix_product,
    projectively_equal,
    scalar_mat_vec,
)
from .errors import (
    MalformedInput,
    NoCommonTail,
    NonPositiveImage,
    RankMismatch,
    UnknownGenerator,
)
from .scalars import ScalarVector, vector_from_json, vector_to_json

EXACT = "exact"
DEPTH_BOUNDED = "depth_bounded"


@dataclass(frozen=True)
class GeneratorAction:
    """A named generator given either by a unimodular matrix acting on the
    column (1, theta), or by an explicit expansion of its image vector."""

    name: str
    matrix: Optional[list] = None
    expansion: Optional[Expansion] = None

    def __post_init__(self):
        if (self.matrix is None) == (self.expansion is None):
            raise MalformedInput(
                "generator %r needs exactly one of matrix or expansion" % self.name
            )
        if self.matrix is not None:
            intmat.check_unimodular(self.matrix)


@dataclass(frozen=True)
class TailAlignment:
    """Result of aligning several streams on a shared tail."""

    offsets: tuple
    tail: Expansion
    certification: str
    compared_depth: Optional[int] = None


def _canonical(exp):
    if exp.tail.kind == PERIODIC:
        pre, per = canonical_periodic(exp.blocks[:exp.tail.preperiod], exp.tail.period)
        return list(pre), list(per)
    return list(exp.blocks), None


def _stream_block(pre, per, i):
    if i < len(pre):
        return pre[i]
    return per[(i - len(pre)) % len(per)]


def _rotation_index(reference, candidate):
    for r in range(len(reference)):
        if tuple(reference[r:] + reference[:r]) == tuple(candidate):
            return r
    return None


def _periodic_alignment(streams, blocks_of):
    """Minimal-total-offset alignment of canonical periodic streams."""
    pres = [s[0] for s in streams]
    pers = [s[1] for s in streams]
    length = len(pers[0])
    if any(len(p) != length for p in pers):
        raise NoCommonTail("primitive periods have different lengths")
    rotations = []
    for per in pers:
        r = _rotation_index(pers[0], per)
        if r is None:
            raise NoCommonTail("primitive periods differ under all rotations")
        rotations.append(r)
    best = None
    for phase in range(length):
        cuts = [
            len(pre) + ((phase - rot) % length)
            for pre, rot in zip(pres, rotations)
        ]
        while all(c > 0 for c in cuts):
            previous = [blocks_of(i, cuts[i] - 1) for i in range(len(cuts))]
            if any(b != previous[0] for b in previous):
                break
            cuts = [c - 1 for c in cuts]
        key = (sum(cuts), tuple(cuts))
        if best is None or key < best[0]:
            best = (key, tuple(cuts))
    return best[1]


def common_tail(expansions, depth_budget=16):
    """Align streams on their maximal common tail.

    Maximality means the smallest total removed prefix length, with ties
    broken by the lexicographically smallest offset vector.  Inputs whose
    tails are all exact (terminated or periodic tags) get an exact
    decision; any truncated input limits the search to ``depth_budget``
    offsets per stream and the result is labeled depth-bounded.
    """
    exps = list(expansions)
    if not exps:
        raise MalformedInput("need at least one expansion")
    rank = exps[0].rank
    if any(e.rank != rank for e in exps):
        raise RankMismatch("expansions have mixed ranks")
    if len(exps) == 1:
        e = exps[0]
        cert = EXACT if e.is_exact_tail() else DEPTH_BOUNDED
        return TailAlignment((0,), e, cert, compared_depth=e.depth)
    kinds = {e.tail.kind for e in exps}
    if TRUNCATED in kinds:
        return _common_tail_bounded(exps, depth_budget)
    if kinds == {TERMINATED}:
        blocks = [list(e.blocks) for e in exps]
        s = 0
        while all(s < len(b) for b in blocks):
            last = [b[len(b) - 1 - s] for b in blocks]
            if any(x != last[0] for x in last):
                break
            s += 1
        offsets = tuple(len(b) - s for b in blocks)
        tail = Expansion(
            rank=rank,
            blocks=tuple(blocks[0][offsets[0]:]),
            tail=Tail.terminated(),
        )
        return TailAlignment(offsets, tail, EXACT, compared_depth=s)
    if kinds == {PERIODIC}:
        streams = [_canonical(e) for e in exps]

        def blocks_of(i, j):
            return _stream_block(streams[i][0], streams[i][1], j)

        cuts = _periodic_alignment(streams, blocks_of)
        pre0, per0 = streams[0]
        c0 = cuts[0]
        raw_pre = [blocks_of(0, i) for i in range(c0, max(c0, len(pre0)))]
        shift = max(0, c0 - len(pre0)) % len(per0)
        raw_per = per0[shift:] + per0[:shift]
        tail_pre, tail_per = canonical_periodic(raw_pre, raw_per)
        tail = Expansion(
            rank=rank,
            blocks=tuple(tail_pre) + tuple(tail_per),
            tail=Tail.periodic(len(tail_pre), tail_per),
        )
        return TailAlignment(tuple(cuts), tail, EXACT)
    raise NoCommonTail("terminated and periodic streams share no tail")


def _compositions(total, parts, cap):
    if parts == 1:
        if total <= cap:
            yield (total,)
        return
    for first in range(min(total, cap) + 1):
        for rest in _compositions(total - first, parts - 1, cap):
            yield (first,) + rest


def _common_tail_bounded(exps, depth_budget):
    need = max(e.depth for e in exps) + depth_budget + 8
    realized = [e.realize(need) for e in exps]
    lengths = [len(b) for b in realized]
    m = len(exps)
    cache = {}

    def agree(i, j, ci, cj):
        key = (i, j, ci, cj)
        hit = cache.get(key)
        if hit is None:
            overlap = min(lengths[i] - ci, lengths[j] - cj)
            hit = overlap >= 1 and realized[i][ci:ci + overlap] == realized[j][cj:cj + overlap]
            cache[key] = hit
        return hit

    # cheap pre-check: every stream must align with the first one somehow
    for j in range(1, m):
        if not any(
            agree(0, j, c0, cj)
            for c0 in range(depth_budget + 1)
            for cj in range(depth_budget + 1)
        ):
            raise NoCommonTail(
                "stream %d never aligns with stream 0 within budget %d"
                % (j, depth_budget)
            )
    for total in range(m * depth_budget + 1):
        for cuts in _compositions(total, m, depth_budget):
            if any(cuts[i] >= lengths[i] for i in range(m)):
                continue
            if all(
                agree(i, j, cuts[i], cuts[j])
                for i in range(m)
                for j in range(i + 1, m)
            ):
                compared = min(lengths[i] - cuts[i] for i in range(m))
                tail = Expansion(
                    rank=exps[0].rank,
                    blocks=tuple(realized[0][cuts[0]:]),
                    tail=Tail.truncated(),
                )
                return TailAlignment(
                    tuple(cuts), tail, DEPTH_BOUNDED, compared_depth=compared
                )
    raise NoCommonTail("no joint alignment within budget %d" % depth_budget)


def prefix_matrix(exp, prefix_len):
    """Product of the first ``prefix_len`` step matrices of the stream."""
    return prefix_product(exp, prefix_len)


@dataclass(frozen=True)
class ReportEntry:
    kind: str
    ok: bool
    generator: Optional[str] = None
    message: str = ""


@dataclass(frozen=True)
class VerificationReport:
    entries: tuple
    stationary: Optional[bool] = None
    faithfulness: str = "unchecked"

    def failures(self, kind=None):
        return [
            e
            for e in self.entries
            if not e.ok and (kind is None or e.kind == kind)
        ]

    def has_flag(self, kind, generator=None):
        return any(
            e.kind == kind
            and not e.ok
            and (generator is None or e.generator == generator)
            for e in self.entries
        )

    @property
    def all_ok(self):
        return all(e.ok for e in self.entries)

    def to_json(self):
        return {
            "entries": [
                {
                    "kind": e.kind,
                    "ok": e.ok,
                    "generator": e.generator,
                    "message": e.message,
                }
                for e in self.entries
            ],
            "stationary": self.stationary,
            "faithfulness": self.faithfulness,
        }


@dataclass(frozen=True)
class Representation:
    """Generator-to-matrix assignment together with its audit trail."""

    rank: int
    theta: ScalarVector
    matrices: dict
    supplied: dict
    images: dict
    expansions: dict
    base_expansion: Expansion
    theta_max: Optional[ScalarVector]
    theta_offset: int
    offsets: dict
    certification: str
    alignment: TailAlignment
    report: VerificationReport

    def matrix(self, name):
        if name not in self.matrices:
            raise UnknownGenerator("no generator named %r" % name)
        return self.matrices[name]


def _expand_tagged(vec, depth_budget):
    """Expansion with a certified tail tag when one is found in budget."""
    verdict = detect_period(vec, depth_budget, depth_budget)
    if verdict.expansion is not None:
        return verdict.expansion
    return jpa_expand(vec, depth_budget)


def _reconstruction_entries(names, matrices, offsets, exps, images, theta, theta_max):
    entries = []
    for name in names:
        image = images.get(name)
        if image is None:
            entries.append(
                ReportEntry(
                    "reconstruction",
                    True,
                    name,
                    "no exact image vector supplied; contract unchecked",
                )
            )
            continue
        ok_base = projectively_equal(
            scalar_mat_vec(matrices[name], theta.entries), image.entries
        )
        ok_tail = True
        if theta_max is not None:
            q = prefix_product(exps[name], offsets[name])
            ok_tail = projectively_equal(
                scalar_mat_vec(q, theta_max.entries), image.entries
            )
        entries.append(
            ReportEntry(
                "reconstruction",
                ok_base and ok_tail,
                name,
                "A*theta matches the image exactly"
                if ok_base and ok_tail
                else "image reconstruction failed (base %s, tail %s)"
                % (ok_base, ok_tail),
            )
        )
    return entries


def build_representation(theta, actions, depth_budget=24):
    """Assemble generator matrices from aligned expansions.

    ``theta`` must be exact (rational or algebraic entries).  Matrix
    actions are applied to the column (1, theta) and must land in the
    positive cone.  The certification level records whether the alignment
    rested on exact tail tags or only on depth-bounded data.
    """
    vec = ScalarVector.coerce(theta)
    if not all(e.is_exact() for e in vec.entries):
        raise MalformedInput("theta must be exact for representation building")
    pos = vec.is_positive()
    if not pos:
        raise MalformedInput("theta must be strictly positive")
    base = vec.normalized()
    n = base.rank

    actions = list(actions)
    names = []
    for a in actions:
        if not isinstance(a, GeneratorAction):
            raise MalformedInput("actions must be GeneratorAction values")
        if a.name in names:
            raise MalformedInput("duplicate generator name %r" % a.name)
        names.append(a.name)

    exp_theta = _expand_tagged(base, depth_budget)
    exps = {}
    images = {}
    supplied = {}
    for a in actions:
        if a.matrix is not None:
            if len(a.matrix) != n:
                raise RankMismatch(
                    "generator %r matrix is %dx%d but rank is %d"
                    % (a.name, len(a.matrix), len(a.matrix[0]), n)
                )
            img = scalar_mat_vec(a.matrix, base.entries)
            img_vec = ScalarVector(img)
            if img_vec.is_positive() is not True:
                raise NonPositiveImage(
                    "generator %r maps theta outside the positive cone" % a.name
                )
            img_vec = img_vec.normalized()
            exps[a.name] = _expand_tagged(img_vec, depth_budget)
            images[a.name] = img_vec
            supplied[a.name] = a.matrix
        else:
            if a.expansion.rank != n:
                raise RankMismatch(
                    "generator %r expansion has rank %d, expected %d"
                    % (a.name, a.expansion.rank, n)
                )
            exps[a.name] = a.expansion
            theta_i = a.expansion.theta
            if theta_i is not None and all(e.is_exact() for e in theta_i.entries):
                images[a.name] = theta_i.normalized()
            else:
                images[a.name] = None
            supplied[a.name] = None

    alignment = common_tail([exp_theta] + [exps[nm] for nm in names], depth_budget)
    theta_offset = alignment.offsets[0]
    offsets = {nm: alignment.offsets[i + 1] for i, nm in enumerate(names)}

    q_theta = prefix_product(exp_theta, theta_offset)
    q_theta_inv = intmat.inverse_unimodular(q_theta)
    matrices = {
        nm: intmat.mat_mul(prefix_product(exps[nm], offsets[nm]), q_theta_inv)
        for nm in names
    }

    theta_max = None
    if exp_theta.states is not None and theta_offset < len(exp_theta.states):
        theta_max = exp_theta.states[theta_offset]

    entries = _reconstruction_entries(
        names, matrices, offsets, exps, images, base, theta_max
    )
    if theta_max is None:
        entries.append(
            ReportEntry(
                "alignment",
                True,
                None,
                "tail entry state unavailable (alignment consumed the whole "
                "base stream); fixed-point checks are skipped",
            )
        )
    report = VerificationReport(entries=tuple(entries))
    return Representation(
        rank=n,
        theta=base,
        matrices=matrices,
        supplied=supplied,
        images=images,
        expansions=exps,
        base_expansion=exp_theta,
        theta_max=theta_max,
        theta_offset=theta_offset,
        offsets=offsets,
        certification=alignment.certification,
        alignment=alignment,
        report=report,
    )


def evaluate_word(rep, word):
    """Ordered product of generator powers; inverses are exact because
    every matrix is unimodular."""
    out = intmat.identity(rep.rank)
    for item in word:
        name, exponent = item
        if name not in rep.matrices:
            raise UnknownGenerator("no generator named %r" % name)
        out = intmat.mat_mul(out, intmat.mat_pow(rep.matrices[name], int(exponent)))
    return out


def verify(rep, relations=(), aperiodicity_budget=16):
    """Audit a representation and return the full report.

    Checks, in order: exact image reconstruction for every generator,
    every supplied relation word evaluating to the identity, periodicity
    of the tail vector (a periodic tail voids the aperiodicity hypothesis
    and downgrades faithfulness), fixed points of non-identity matrices
    on the tail vector, and the free-action bookkeeping for generators
    whose image equals the tail vector.  Nothing is assumed: every failed
    check lands in the report.
    """
    ident = intmat.identity(rep.rank)
    names = list(rep.matrices)
    entries = list(
        _reconstruction_entries(
            names,
            rep.matrices,
            rep.offsets,
            rep.expansions,
            rep.images,
            rep.theta,
            rep.theta_max,
        )
    )

    for idx, word in enumerate(relations):
        value = evaluate_word(rep, word)
        ok = intmat.mat_eq(value, ident)
        entries.append(
            ReportEntry(
                "relation",
                ok,
                None,
                "relation %d %s" % (idx, "holds" if ok else "does NOT evaluate to I"),
            )
        )

    stationary = None
    aperiodic_within_budget = False
    hypotheses_ok = True
    if rep.theta_max is None:
        entries.append(
            ReportEntry(
                "aperiodicity",
                True,
                None,
                "tail vector unavailable; aperiodicity unchecked",
            )
        )
        hypotheses_ok = False
    else:
        verdict = detect_period(
            rep.theta_max, aperiodicity_budget, aperiodicity_budget
        )
        if verdict.is_periodic:
            stationary = True
            hypotheses_ok = False
            entries.append(
                ReportEntry(
                    "aperiodicity",
                    False,
                    None,
                    "stationary: not in the aperiodic class (period %r certified "
                    "at preperiod %d)" % (list(verdict.period), verdict.preperiod),
                )
            )
        elif verdict.kind == TERMINATED:
            stationary = False
            hypotheses_ok = False
            entries.append(
                ReportEntry(
                    "aperiodicity",
                    False,
                    None,
                    "tail vector is rationally dependent (terminated stream); "
                    "the aperiodicity hypothesis does not apply",
                )
            )
        else:
            stationary = False
            aperiodic_within_budget = True
            entries.append(
                ReportEntry(
                    "aperiodicity",
                    True,
                    None,
                    "no period found up to depth %d (depth-bounded)" % verdict.depth,
                )
            )

    if rep.theta_max is not None:
        tail_entries = rep.theta_max.entries
        for nm in names:
            a = rep.matrices[nm]
            computed_is_identity = intmat.mat_eq(a, ident)
            if not computed_is_identity:
                if projectively_equal(scalar_mat_vec(a, tail_entries), tail_entries):
                    hypotheses_ok = False
                    entries.append(
                        ReportEntry(
                            "fixes_theta_max",
                            False,
                            nm,
                            "computed matrix fixes the tail vector projectively",
                        )
                    )
                    if aperiodic_within_budget:
                        entries.append(
                            ReportEntry(
                                "internal_inconsistency",
                                False,
                                nm,
                                "matrix fixes a tail vector that showed no period "
                                "within budget; data or alignment is inconsistent",
                            )
                        )
                else:
                    entries.append(
                        ReportEntry(
                            "fixed_point",
                            True,
                            nm,
                            "matrix does not fix the tail vector",
                        )
                    )
            m = rep.supplied.get(nm)
            if m is not None and not intmat.mat_eq(m, ident):
                if projectively_equal(scalar_mat_vec(m, tail_entries), tail_entries):
                    hypotheses_ok = False
                    entries.append(
                        ReportEntry(
                            "fixes_theta_max",
                            False,
                            nm,
                            "supplied action fixes the tail vector projectively",
                        )
                    )
            image = rep.images.get(nm)
            if image is not None and projectively_equal(
                image.entries, tail_entries
            ):
                acts_nontrivially = (
                    m is not None and not intmat.mat_eq(m, ident)
                ) or not computed_is_identity
                if acts_nontrivially:
                    hypotheses_ok = False
                    entries.append(
                        ReportEntry(
                            "free_action",
                            False,
                            nm,
                            "generator fixes the base algebra but is not the "
                            "identity: the free-action hypothesis fails",
                        )
                    )

    if not hypotheses_ok:
        faithfulness = "not_guaranteed"
    elif rep.certification == EXACT:
        faithfulness = "conditional_on_aperiodicity"
    else:
        faithfulness = "conditional_depth_bounded"
    return VerificationReport(
        entries=tuple(entries), stationary=stationary, faithfulness=faithfulness
    )


def representation_to_json(rep):
    out = {
        "rank": rep.rank,
        "certification": rep.certification,
        "theta_offset": rep.theta_offset,
        "offsets": dict(rep.offsets),
        "matrices": {nm: [list(r) for r in m] for nm, m in rep.matrices.items()},
        "report": rep.report.to_json(),
    }
    if rep.theta_max is not None:
        out["theta_max"] = vector_to_json(rep.theta_max)
    return out


def action_from_json(obj):
    if not isinstance(obj, dict) or "name" not in obj:
        raise MalformedInput("generator entry needs a name")
    name = str(obj["name"])
    if "matrix" in obj:
        matrix = [[int(x) for x in row] for row in obj["matrix"]]
        return GeneratorAction(name=name, matrix=matrix)
    if "expansion" in obj:
        return GeneratorAction(name=name, expansion=expansion_from_json(obj["expansion"]))
    raise MalformedInput("generator %r needs a matrix or an expansion" % name)


def job_from_json(obj):
    """Parse {"rank", "theta", "generators", "relations"} into inputs."""
    if not isinstance(obj, dict):
        raise MalformedInput("group action input must be a JSON object")
    try:
        theta = vector_from_json(obj["theta"])
    except KeyError as exc:
        raise MalformedInput("missing theta") from exc
    actions = [action_from_json(g) for g in obj.get("generators", [])]
    relations = [
        [(str(g), int(k)) for g, k in word] for word in obj.get("relations", [])
    ]
    if "rank" in obj and int(obj["rank"]) != theta.rank:
        raise MalformedInput("declared rank disagrees with theta length")
    return theta, actions, relations
