"""
The truncated path coalgebra of type A-infinity-infinity.

Right comodules are the intervals ``V(i, j)`` (top at ``i``, socle at ``j``,
arrows ``a_k: k -> k+1``); left comodules are ``U(i, j) = D V(i, j)`` over the
opposite quiver. Closed forms for the functors are index maps; ``verify``
checks them against the representation-theoretic oracle.
"""

import enum
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.arquiver import ARNode, ARQuiver
from src.batch import run_batch
from src.errors import ContractViolation, InjectiveInput, WindowExceeded
from src.exactlin import RatMatrix
from src.families.base import CoalgebraFamily
from src.quiverrep import functors
from src.quiverrep.oracle import is_isomorphic, realize_ses
from src.quiverrep.presentation import AlgebraPresentation, Arrow, Quiver, Relation, same_presentation
from src.quiverrep.representation import Representation, ShortExactSeq, direct_sum, zero
from src.reports import CheckResult, Report

logger = logging.getLogger(__name__)


class Side(str, enum.Enum):
    V = "V"
    U = "U"

    def flip(self) -> "Side":
        return Side.U if self is Side.V else Side.V


@dataclass(frozen=True)
class Interval:
    side: Side
    i: int
    j: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "side", Side(self.side))
        if self.j < self.i - 1:
            raise ContractViolation(f"Interval needs j >= i - 1, got ({self.i}, {self.j})")

    @property
    def is_zero(self) -> bool:
        return self.j == self.i - 1

    @property
    def length(self) -> int:
        return self.j - self.i

    @property
    def dim(self) -> int:
        return self.j - self.i + 1

    def shift(self, delta: int) -> "Interval":
        return make(self.side, self.i + delta, self.j + delta)

    def text(self) -> str:
        if self.is_zero:
            return "0"
        return f"{self.side.value} {self.i} {self.j}"

    def node_id(self) -> str:
        return f"{self.side.value}:{self.i}:{self.j}"

    def label(self, n: int) -> str:
        if self.is_zero:
            return "0"
        mark = "" if self.side is Side.V else "'"
        if self.i == self.j:
            return f"S{mark}({self.i})"
        if self.length == n:
            anchor = self.j if self.side is Side.V else self.i
            return f"I{mark}({anchor})"
        return f"{self.side.value}({self.i},{self.j})"


ZERO = Interval(Side.V, 0, -1)


def make(side: Side, i: int, j: int) -> Interval:
    if j == i - 1:
        return ZERO
    return Interval(side, i, j)


def parse_interval(tokens: Sequence[str], n: int) -> Interval:
    """``V i j``, ``U i j``, ``S i`` or ``I i``."""
    if not tokens:
        raise ContractViolation("Missing interval")
    head = tokens[0].upper()
    try:
        values = [int(t) for t in tokens[1:]]
    except ValueError:
        raise ContractViolation(f"Interval indices must be integers: {' '.join(tokens)}") from None
    if head in ("V", "U") and len(values) == 2:
        return Interval(Side(head), values[0], values[1])
    if head == "S" and len(values) == 1:
        return Interval(Side.V, values[0], values[0])
    if head == "I" and len(values) == 1:
        return Interval(Side.V, values[0] - n, values[0])
    raise ContractViolation(f"Cannot parse interval {' '.join(tokens)!r}")


@dataclass(frozen=True)
class SerialFamily(CoalgebraFamily):
    n: int
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ContractViolation("n must be positive")
        if self.hi - self.lo < self.n + 2:
            raise ContractViolation(f"Window [{self.lo},{self.hi}] is too small for n={self.n}")

    @property
    def family_name(self) -> str:
        return f"serial(n={self.n},[{self.lo},{self.hi}])"

    def presentation(self) -> AlgebraPresentation:
        return self._presentation

    @cached_property
    def _presentation(self) -> AlgebraPresentation:
        vertices = tuple(range(self.lo, self.hi + 1))
        arrows = tuple(Arrow(k - self.lo, k, k + 1, f"a{k}") for k in range(self.lo, self.hi))
        relations = tuple(
            Relation.monomial(tuple(range(k - self.lo, k - self.lo + self.n + 1)))
            for k in range(self.lo, self.hi - self.n)
        )
        return AlgebraPresentation(
            quiver=Quiver(vertices, arrows),
            relations=relations,
            nilpotency_bound=self.n + 1,
            projective_safe=frozenset(v for v in vertices if v + self.n <= self.hi),
            injective_safe=frozenset(v for v in vertices if v - self.n >= self.lo),
            name=self.family_name,
        )

    def presentation_for(self, side: Side) -> AlgebraPresentation:
        pres = self.presentation()
        return pres if side is Side.V else pres.opposite()

    def check(self, v: Interval) -> Interval:
        if v.length > self.n:
            raise ContractViolation(f"{v.text()} is longer than n={self.n}")
        return v

    def contains(self, v: Interval) -> bool:
        return v.is_zero or (self.lo <= v.i and v.j <= self.hi)

    def is_injective(self, v: Interval) -> bool:
        return not v.is_zero and v.length == self.n

    def require_window(self, *intervals: Interval) -> None:
        for v in intervals:
            if not self.contains(v):
                raise WindowExceeded(f"{v.text()} lies outside the window [{self.lo},{self.hi}]")

    def safe_range(self, margin: Optional[int] = None) -> Tuple[int, int]:
        """Vertex range whose intervals support every oracle operation."""
        margin = self.n + 1 if margin is None else margin
        if margin < self.n + 1:
            raise ContractViolation(f"margin must be at least n + 1 = {self.n + 1}")
        return (self.lo + margin, self.hi - margin)

    def realize(self, v: Interval, side: Optional[Side] = None) -> Representation:
        side = v.side if side is None else side
        pres = self.presentation_for(side)
        if v.is_zero:
            return zero(pres)
        self.check(v)
        self.require_window(v)
        one = RatMatrix.identity(1)
        dims = {k: 1 for k in range(v.i, v.j + 1)}
        action: Dict[int, RatMatrix] = {k - self.lo: one for k in range(v.i, v.j)}
        return Representation(pres, dims, action, name=v.label(self.n))

    def identify(self, rep: Representation) -> Optional[Interval]:
        pres = self.presentation()
        if same_presentation(rep.presentation, pres):
            side = Side.V
        elif same_presentation(rep.presentation, pres.opposite()):
            side = Side.U
        else:
            return None
        if rep.is_zero():
            return ZERO
        support = rep.support()
        if any(rep.dim(v) != 1 for v in support) or support != tuple(range(support[0], support[-1] + 1)):
            return None
        candidate = Interval(side, support[0], support[-1])
        if candidate.length > self.n:
            return None
        return candidate if is_isomorphic(rep, self.realize(candidate)).isomorphic else None


# --- closed forms ---


def _non_injective(fam: SerialFamily, v: Interval) -> bool:
    fam.check(v)
    return not v.is_zero and v.length < fam.n


def injective_of_simple(fam: SerialFamily, s: int) -> Interval:
    result = Interval(Side.V, s - fam.n, s)
    fam.require_window(result)
    return result


def _checked(fam: SerialFamily, *intervals: Interval) -> Interval:
    fam.require_window(*intervals)
    return intervals[-1]


def single_cosyzygy(fam: SerialFamily, v: Interval) -> Interval:
    if not _non_injective(fam, v):
        return ZERO
    if v.side is Side.V:
        return _checked(fam, v, make(Side.V, v.j - fam.n, v.i - 1))
    return _checked(fam, v, make(Side.U, v.j + 1, v.i + fam.n))


def single_syzygy(fam: SerialFamily, v: Interval) -> Interval:
    if not _non_injective(fam, v):
        return ZERO
    if v.side is Side.V:
        return _checked(fam, v, make(Side.V, v.j + 1, v.i + fam.n))
    return _checked(fam, v, make(Side.U, v.j - fam.n, v.i - 1))


def cosyzygy2(fam: SerialFamily, v: Interval) -> Interval:
    if not _non_injective(fam, v):
        return ZERO
    step = -(fam.n + 1) if v.side is Side.V else fam.n + 1
    return _checked(fam, v, v.shift(step))


def nakayama_cf(fam: SerialFamily, v: Interval) -> Interval:
    fam.check(v)
    if v.is_zero:
        return ZERO
    return _checked(fam, v, v.shift(fam.n if v.side is Side.V else -fam.n))


def dtr_cf(fam: SerialFamily, v: Interval) -> Interval:
    if not _non_injective(fam, v):
        return ZERO
    return _checked(fam, v, v.shift(-1 if v.side is Side.V else 1))


def dtr_inverse_cf(fam: SerialFamily, v: Interval) -> Interval:
    """The object whose translate is ``v``."""
    fam.check(v)
    if v.is_zero:
        return ZERO
    return _checked(fam, v, v.shift(1 if v.side is Side.V else -1))


def transpose_cf(fam: SerialFamily, v: Interval) -> Interval:
    if not _non_injective(fam, v):
        return ZERO
    if v.side is Side.V:
        return _checked(fam, v, make(Side.U, v.i - 1, v.j - 1))
    return _checked(fam, v, make(Side.V, v.i + 1, v.j + 1))


def star_cf(fam: SerialFamily, v: Interval) -> Interval:
    fam.check(v)
    if v.is_zero:
        return ZERO
    if v.side is Side.V:
        return _checked(fam, v, make(Side.U, v.i + fam.n, v.j + fam.n))
    return _checked(fam, v, make(Side.V, v.i - fam.n, v.j - fam.n))


def printed_u_reading(fam: SerialFamily, operation: str, v: Interval) -> Optional[Interval]:
    """The V-labelled outputs printed for U inputs (same indices, other side)."""
    if v.side is not Side.U or operation not in ("cosyzygy2", "nakayama", "dtr"):
        return None
    result = CLOSED_FORMS[operation](fam, v)
    return result if result.is_zero else Interval(Side.V, result.i, result.j)


CLOSED_FORMS: Dict[str, Callable[[SerialFamily, Interval], Interval]] = {
    "syzygy": single_syzygy,
    "cosyzygy": single_cosyzygy,
    "cosyzygy2": cosyzygy2,
    "nakayama": nakayama_cf,
    "dtr": dtr_cf,
    "transpose": transpose_cf,
    "star": star_cf,
}

ORACLES: Dict[str, Callable[[Representation], Representation]] = {
    "syzygy": functors.syzygy,
    "cosyzygy": functors.cosyzygy,
    "cosyzygy2": lambda m: functors.syzygy_power(m, -2),
    "nakayama": functors.nakayama,
    "dtr": functors.dtr,
    "transpose": functors.transpose,
    "star": functors.star,
}


# --- almost split sequences ---


@dataclass(frozen=True)
class IntervalSequence:
    left: Interval
    middle: Tuple[Interval, ...]
    right: Interval

    def text(self) -> str:
        middle = " + ".join(m.text() for m in self.middle)
        return f"0 -> {self.left.text()} -> {middle} -> {self.right.text()} -> 0"


def almost_split(fam: SerialFamily, v: Interval) -> IntervalSequence:
    """The almost split sequence starting at ``v``; its right end is ``dtr_cf(v)``."""
    fam.check(v)
    if v.is_zero or fam.is_injective(v):
        raise InjectiveInput(f"No almost split sequence starts at {v.text()}")
    if v.side is Side.V:
        middle = (make(Side.V, v.i - 1, v.j), make(Side.V, v.i, v.j - 1))
    else:
        middle = (make(Side.U, v.i, v.j + 1), make(Side.U, v.i + 1, v.j))
    middle = tuple(m for m in middle if not m.is_zero)
    right = dtr_cf(fam, v)
    fam.require_window(v, right, *middle)
    return IntervalSequence(v, middle, right)


def almost_split_ending(fam: SerialFamily, v: Interval) -> IntervalSequence:
    """The almost split sequence ending at ``v``."""
    fam.check(v)
    if v.is_zero or fam.is_injective(v):
        raise InjectiveInput(f"No almost split sequence ends at the projective {v.text()}")
    return almost_split(fam, dtr_inverse_cf(fam, v))


def realize_sequence(fam: SerialFamily, seq: IntervalSequence) -> Optional[ShortExactSeq]:
    left = fam.realize(seq.left)
    middle = direct_sum(*(fam.realize(m) for m in seq.middle))
    right = fam.realize(seq.right)
    return realize_ses(left, middle, right)


# --- AR quiver ---


def ar_quiver(fam: SerialFamily) -> ARQuiver:
    n, lo, hi = fam.n, fam.lo, fam.hi
    intervals = [
        Interval(Side.V, i, i + length)
        for length in range(n + 1)
        for i in range(lo, hi - length + 1)
    ]
    present = set(intervals)
    smax = max(v.i + v.j for v in intervals)
    nodes = [
        ARNode(
            node_id=v.node_id(),
            label=v.label(n),
            dim_total=v.dim,
            injective=fam.is_injective(v),
            incomplete=v.i - 1 < lo or v.j + 1 > hi,
        )
        for v in intervals
    ]
    arrows = []
    translation = []
    for v in intervals:
        for w in (make(Side.V, v.i - 1, v.j), make(Side.V, v.i, v.j - 1)):
            if w in present:
                arrows.append((v.node_id(), w.node_id()))
        if not fam.is_injective(v):
            tau = v.shift(-1)
            if tau in present:
                translation.append((v.node_id(), tau.node_id()))
    layout = {v.node_id(): (v.length, smax - (v.i + v.j)) for v in intervals}
    return ARQuiver.build(nodes, arrows, translation, layout)


# --- verification against the oracle ---

DEFAULT_OPERATIONS = (
    "syzygy",
    "cosyzygy",
    "cosyzygy2",
    "nakayama",
    "dtr",
    "transpose",
    "star",
    "almost_split",
    "omega_inverse",
    "non_symmetric",
    "self_projective",
    "star_exact",
    "star_cosyzygy2",
    "nakayama_commutes",
)


def intervals_in(range_lo: int, range_hi: int, n: int, sides: Sequence[Side] = (Side.V, Side.U)) -> List[Interval]:
    return [
        Interval(side, i, j)
        for side in sides
        for i in range(range_lo, range_hi + 1)
        for j in range(i, min(i + n, range_hi) + 1)
    ]


def _row(fam: SerialFamily, check: str, v: Interval, expected: str, observed: str, passed: bool, note=None) -> CheckResult:
    return CheckResult(fam.family_name, check, v.text(), expected, observed, passed, note)


def _compare(fam: SerialFamily, operation: str, v: Interval) -> CheckResult:
    expected = CLOSED_FORMS[operation](fam, v)
    try:
        oracle = ORACLES[operation](fam.realize(v))
    except WindowExceeded as exc:
        return _row(fam, operation, v, expected.text(), "window exceeded", False, str(exc))
    if expected.is_zero:
        return _row(fam, operation, v, "0", "0" if oracle.is_zero() else repr(oracle), oracle.is_zero())
    verdict = is_isomorphic(oracle, fam.realize(expected))
    observed = expected.text() if verdict.isomorphic else (verdict.reason or "not isomorphic")
    note = None
    printed = printed_u_reading(fam, operation, v)
    if printed is not None:
        side = "U" if verdict.isomorphic else "neither"
        note = f"printed reading {printed.text()} is a right comodule; oracle side {side}"
    return _row(fam, operation, v, expected.text(), observed, verdict.isomorphic, note)


def _check_almost_split(fam: SerialFamily, v: Interval) -> CheckResult:
    seq = almost_split(fam, v)
    realized = realize_sequence(fam, seq)
    if realized is None:
        return _row(fam, "almost_split", v, seq.text(), "no exact sequence found", False)
    translate = functors.dtr(realized.left)
    endpoint = is_isomorphic(translate, realized.right).isomorphic
    passed = bool(realized.non_split) and endpoint
    observed = "exact, " + ("non-split" if realized.non_split else "split") + (", right = DTr(left)" if endpoint else "")
    return _row(fam, "almost_split", v, seq.text(), observed, passed)


def _check_star_exact(fam: SerialFamily, v: Interval) -> CheckResult:
    realized = realize_sequence(fam, almost_split(fam, v))
    if realized is None:
        return _row(fam, "star_exact", v, "exact", "no sequence", False)
    exact = functors.check_star_exact(realized)
    return _row(fam, "star_exact", v, "exact", "exact" if exact else "not exact", exact)


def _check_omega_inverse(fam: SerialFamily, v: Interval) -> List[CheckResult]:
    rep = fam.realize(v)
    there_and_back = is_isomorphic(functors.cosyzygy(functors.syzygy(rep)), rep).isomorphic
    back_and_there = is_isomorphic(functors.syzygy(functors.cosyzygy(rep)), rep).isomorphic
    return [
        _row(fam, "omega_inverse", v, v.text(), v.text() if there_and_back else "differs", there_and_back, "cosyzygy(syzygy)"),
        _row(fam, "omega_inverse", v, v.text(), v.text() if back_and_there else "differs", back_and_there, "syzygy(cosyzygy)"),
    ]


def _check_non_symmetric(fam: SerialFamily, v: Interval) -> CheckResult:
    rep = fam.realize(v)
    verdict = is_isomorphic(functors.nakayama(rep), rep)
    return _row(fam, "non_symmetric", v, "nu(M) not iso M", "iso" if verdict.isomorphic else "not iso", not verdict.isomorphic)


def _check_self_projective(fam: SerialFamily, v: Interval) -> List[CheckResult]:
    pres = fam.presentation_for(v.side)
    rep = fam.realize(v)
    if v.side is Side.V:
        inj_vertex, proj_vertex = v.j, v.i
    else:
        inj_vertex, proj_vertex = v.i, v.j
    as_injective = is_isomorphic(rep, functors.injective(pres, inj_vertex)).isomorphic
    as_projective = is_isomorphic(rep, functors.projective(pres, proj_vertex)).isomorphic
    nu_image = nakayama_cf(fam, v)
    nu_injective = is_isomorphic(functors.nakayama(rep), fam.realize(nu_image)).isomorphic and fam.is_injective(nu_image)
    return [
        _row(fam, "self_projective", v, f"I({inj_vertex})", "iso" if as_injective else "not iso", as_injective),
        _row(fam, "self_projective", v, f"P({proj_vertex})", "iso" if as_projective else "not iso", as_projective),
        _row(fam, "self_projective", v, f"nu = {nu_image.text()}", "iso" if nu_injective else "not iso", nu_injective),
    ]


def _check_star_cosyzygy2(fam: SerialFamily, v: Interval) -> CheckResult:
    rep = fam.realize(v)
    left = functors.star(functors.syzygy_power(rep, -2))
    right = functors.transpose(rep)
    verdict = is_isomorphic(left, right)
    return _row(fam, "star_cosyzygy2", v, "Tr(M)", "iso" if verdict.isomorphic else (verdict.reason or "not iso"), verdict.isomorphic)


def _check_nakayama_commutes(fam: SerialFamily, v: Interval) -> CheckResult:
    rep = fam.realize(v)
    left = functors.syzygy_power(functors.nakayama(rep), -2)
    right = functors.nakayama(functors.syzygy_power(rep, -2))
    verdict = is_isomorphic(left, right)
    expected = cosyzygy2(fam, nakayama_cf(fam, v)).text()
    return _row(fam, "nakayama_commutes", v, expected, expected if verdict.isomorphic else "differs", verdict.isomorphic)


def _listed(check: Callable[[SerialFamily, Interval], CheckResult]) -> Callable[[SerialFamily, Interval], List[CheckResult]]:
    return lambda fam, v: [check(fam, v)]


# operation -> (runs on injective inputs, check)
_EXTRA_CHECKS: Dict[str, Tuple[bool, Callable[[SerialFamily, Interval], List[CheckResult]]]] = {
    "almost_split": (False, _listed(_check_almost_split)),
    "star_exact": (False, _listed(_check_star_exact)),
    "omega_inverse": (False, _check_omega_inverse),
    "non_symmetric": (False, _listed(_check_non_symmetric)),
    "self_projective": (True, _check_self_projective),
    "star_cosyzygy2": (False, _listed(_check_star_cosyzygy2)),
    "nakayama_commutes": (False, _listed(_check_nakayama_commutes)),
}


def _checks_for(fam: SerialFamily, v: Interval, operations: Sequence[str]) -> List[CheckResult]:
    rows: List[CheckResult] = []
    injective = fam.is_injective(v)
    for op in operations:
        if op in CLOSED_FORMS:
            rows.append(_compare(fam, op, v))
            continue
        on_injective, check = _EXTRA_CHECKS[op]
        if on_injective != injective:
            continue
        try:
            rows.extend(check(fam, v))
        except WindowExceeded as exc:
            rows.append(_row(fam, op, v, "computable", "window exceeded", False, str(exc)))
    return rows


def closed_form_coherence(fam: SerialFamily, intervals: Sequence[Interval]) -> List[CheckResult]:
    """Symbolic identities between the index maps."""
    rows: List[CheckResult] = []
    for v in intervals:
        if fam.is_injective(v):
            continue
        translate = dtr_cf(fam, v)
        composite = nakayama_cf(fam, cosyzygy2(fam, v))
        rows.append(_row(fam, "coherence", v, translate.text(), composite.text(), composite == translate, "nu o cosyzygy2"))
        dualized = transpose_cf(fam, v)
        dualized = Interval(dualized.side.flip(), dualized.i, dualized.j)
        rows.append(_row(fam, "coherence", v, translate.text(), dualized.text(), dualized == translate, "D o Tr"))
        twice = single_cosyzygy(fam, single_cosyzygy(fam, v))
        rows.append(_row(fam, "coherence", v, cosyzygy2(fam, v).text(), twice.text(), twice == cosyzygy2(fam, v), "cosyzygy twice"))
        commuted = cosyzygy2(fam, nakayama_cf(fam, v))
        rows.append(_row(fam, "coherence", v, composite.text(), commuted.text(), commuted == composite, "cosyzygy2 o nu"))
        seq = almost_split(fam, v)
        additive = seq.left.dim + seq.right.dim == sum(m.dim for m in seq.middle)
        rows.append(_row(fam, "coherence", v, "additive", "additive" if additive else "not additive", additive, "almost split dims"))
    return rows


def default_margin(n: int, depth: int = 2) -> int:
    return max(n + 1, 2 * depth + 2)


def verify(
    fam: SerialFamily,
    operations: Sequence[str] = DEFAULT_OPERATIONS,
    interval_range: Optional[Tuple[int, int]] = None,
    threads: int = 1,
    sides: Sequence[Side] = (Side.V, Side.U),
    margin: Optional[int] = None,
) -> Report:
    safe_lo, safe_hi = fam.safe_range()
    if interval_range is None:
        interval_range = fam.safe_range(default_margin(fam.n) if margin is None else margin)
    range_lo, range_hi = interval_range
    if range_lo > range_hi:
        raise WindowExceeded(f"Window [{fam.lo},{fam.hi}] leaves no intervals at this margin")
    if range_lo < safe_lo or range_hi > safe_hi:
        raise WindowExceeded(
            f"Interval range [{range_lo},{range_hi}] needs margin; window [{fam.lo},{fam.hi}] supports [{safe_lo},{safe_hi}]"
        )
    unknown = [op for op in operations if op not in DEFAULT_OPERATIONS]
    if unknown:
        raise ContractViolation(f"Unknown operations: {', '.join(unknown)}")
    intervals = intervals_in(range_lo, range_hi, fam.n, sides)
    # warm the shared algebra caches before fanning out
    fam.presentation().algebra
    fam.presentation().opposite().algebra
    tasks = [lambda v=v: _checks_for(fam, v, operations) for v in intervals]
    chunks = run_batch(tasks, threads)
    chunks.append(closed_form_coherence(fam, intervals))
    report = Report.collect(f"{fam.family_name} on [{range_lo},{range_hi}]", chunks)
    logger.info(report.summary())
    return report
