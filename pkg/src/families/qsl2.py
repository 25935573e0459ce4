"""
The non-trivial block of quantum SL(2) at a root of unity, truncated to the
vertex window [0, w].

Quiver: ``a_i: i -> i+1`` (arrow id ``2i``) and ``b_i: i+1 -> i`` (arrow id
``2i+1``). In the dual algebra the length-two paths that do not occur in the
block die, the two loops at every vertex ``i+1`` are identified, and all paths
of length three vanish:

    a_{i+1} a_i = 0,   b_i b_{i+1} = 0,   a_i b_i = b_{i+1} a_{i+1}

Paths are stored in traversal order, so ``a_i b_i`` (``b_i`` first) is the
traversal ``(2i+1, 2i)``. The window keeps the loop at ``w`` but not the
arrows beyond it, so only vertices ``0..w-1`` carry honest projectives.
Non-injective indecomposables are the ``Omega^k S(n)``; they are realized by
iterating syzygies from the simple and checked against the oracle.
"""

import logging
import random
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

from src.arquiver import ARNode, ARQuiver
from src.batch import run_batch
from src.errors import ContractViolation, InjectiveInput, WindowExceeded
from src.exactlin import RatMatrix, rank
from src.families.base import CoalgebraFamily
from src.quiverrep import functors
from src.quiverrep.homs import hom_basis
from src.quiverrep.oracle import fitting_decompose, is_isomorphic, realize_ses
from src.quiverrep.presentation import AlgebraPresentation, Arrow, Path, Quiver, Relation, same_presentation
from src.quiverrep.representation import (
    Representation,
    ShortExactSeq,
    direct_sum,
    linear_combination,
    simple,
)
from src.reports import CheckResult, Report

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class StringObject:
    """``Omega^k S(n)``; ``k = 0`` is the simple itself."""

    k: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ContractViolation(f"Simple index must be nonnegative, got {self.n}")

    def omega(self, steps: int) -> "StringObject":
        return StringObject(self.k + steps, self.n)

    def text(self) -> str:
        return f"S {self.n}" if self.k == 0 else f"O^{self.k} S {self.n}"

    def label(self) -> str:
        return f"S({self.n})" if self.k == 0 else f"O^{self.k}S({self.n})"

    def node_id(self) -> str:
        return f"O:{self.k}:{self.n}"


@dataclass(frozen=True, order=True)
class InjectiveLabel:
    n: int

    def text(self) -> str:
        return f"I {self.n}"

    def label(self) -> str:
        return f"I({self.n})"

    def node_id(self) -> str:
        return f"I:{self.n}"


BlockObject = Union[StringObject, InjectiveLabel]

_STRING_RE = re.compile(r"^(?:O\^(-?\d+)\s*)?S\s*(\d+)$")
_INJECTIVE_RE = re.compile(r"^I\s*(\d+)$")


def parse_object(tokens: Sequence[str]) -> BlockObject:
    """``O^k S n``, ``S n`` or ``I n``."""
    text = " ".join(tokens).strip()
    match = _STRING_RE.match(text)
    if match:
        return StringObject(int(match.group(1) or 0), int(match.group(2)))
    match = _INJECTIVE_RE.match(text)
    if match:
        return InjectiveLabel(int(match.group(1)))
    raise ContractViolation(f"Cannot parse block object {text!r}")


def omega(obj: StringObject, steps: int) -> StringObject:
    return obj.omega(steps)


@dataclass(frozen=True)
class SymSequence:
    left: StringObject
    middle: Tuple[BlockObject, ...]
    right: StringObject

    def terms(self) -> Tuple[BlockObject, ...]:
        return (self.left, *self.middle, self.right)

    def text(self) -> str:
        middle = " + ".join(m.label() for m in self.middle)
        return f"0 -> {self.left.label()} -> {middle} -> {self.right.label()} -> 0"


def sym_sequence(i: int, n: int) -> SymSequence:
    """0 -> O^{i+1}S(n) -> O^i S(n-1) + O^i S(n+1) [+ I(n) if i = 0] -> O^{i-1}S(n) -> 0"""
    middle: List[BlockObject] = []
    if n >= 1:
        middle.append(StringObject(i, n - 1))
    middle.append(StringObject(i, n + 1))
    if i == 0:
        middle.append(InjectiveLabel(n))
    return SymSequence(StringObject(i + 1, n), tuple(middle), StringObject(i - 1, n))


def block_presentation(w: int, name: str = "") -> AlgebraPresentation:
    arrows = []
    for i in range(w):
        arrows.append(Arrow(2 * i, i, i + 1, f"a{i}"))
        arrows.append(Arrow(2 * i + 1, i + 1, i, f"b{i}"))
    relations = []
    for i in range(w - 1):
        relations.append(Relation.monomial((2 * i, 2 * i + 2)))
        relations.append(Relation.monomial((2 * i + 3, 2 * i + 1)))
        relations.append(Relation.binomial((2 * i + 1, 2 * i), (2 * i + 2, 2 * i + 3)))
    honest = frozenset(range(w))
    return AlgebraPresentation(
        quiver=Quiver(tuple(range(w + 1)), tuple(arrows)),
        relations=tuple(relations),
        nilpotency_bound=3,
        projective_safe=honest,
        injective_safe=honest,
        name=name or f"qsl2([0,{w}])",
    )


@dataclass(frozen=True)
class BlockFamily(CoalgebraFamily):
    window: int
    margin: int = 2
    _realized: Dict[StringObject, Representation] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.window < 4:
            raise ContractViolation(f"Window [0,{self.window}] is too small; need w >= 4")
        if not 1 <= self.margin <= self.window - 1:
            raise ContractViolation(f"margin must lie in [1, {self.window - 1}], got {self.margin}")

    @classmethod
    def with_depth(cls, window: int, depth: int) -> "BlockFamily":
        return cls(window, default_margin(window, depth))

    @property
    def family_name(self) -> str:
        return f"qsl2([0,{self.window}])"

    @property
    def interior(self) -> Tuple[int, ...]:
        return tuple(range(0, self.window - self.margin + 1))

    def presentation(self) -> AlgebraPresentation:
        return self._presentation

    @cached_property
    def _presentation(self) -> AlgebraPresentation:
        return block_presentation(self.window, self.family_name)

    # --- objects ---

    def require_window(self, obj: BlockObject) -> None:
        if isinstance(obj, InjectiveLabel):
            reach = obj.n
        else:
            reach = obj.n + abs(obj.k)
        if reach > self.window - 1:
            raise WindowExceeded(f"{obj.label()} needs vertices beyond the window [0,{self.window}]")

    def injective(self, n: int) -> Representation:
        self.require_window(InjectiveLabel(n))
        return functors.injective(self.presentation(), n).relabel(f"I({n})")

    def realize(self, obj: BlockObject) -> Representation:
        if isinstance(obj, InjectiveLabel):
            return self.injective(obj.n)
        self.require_window(obj)
        with self._lock:
            cached = self._realized.get(obj)
        if cached is not None:
            return cached
        if obj.k == 0:
            rep = simple(self.presentation(), obj.n)
        elif obj.k > 0:
            rep = functors.syzygy(self.realize(obj.omega(-1)))
        else:
            rep = functors.cosyzygy(self.realize(obj.omega(1)))
        pieces = fitting_decompose(rep).summands
        if len(pieces) != 1:
            raise ContractViolation(f"{obj.label()} realizes as {len(pieces)} summands")
        rep = rep.relabel(obj.label())
        logger.debug("Realized %s with dimension vector %s", obj.label(), rep.dim_vector())
        with self._lock:
            return self._realized.setdefault(obj, rep)

    def dim_vector(self, obj: BlockObject) -> Dict[int, int]:
        return self.realize(obj).dim_vector()

    def _candidates(self, target: Dict[int, int]) -> List[BlockObject]:
        """Objects with the target dimension vector, walking outwards in |k| per simple."""
        total = sum(target.values())
        out: List[BlockObject] = [InjectiveLabel(n) for n in range(self.window) if self.dim_vector(InjectiveLabel(n)) == target]
        for n in range(self.window):
            for direction in (1, -1):
                k = 0 if direction == 1 else -1
                while n + abs(k) <= self.window - 1:
                    obj = StringObject(k, n)
                    dims = self.dim_vector(obj)
                    if sum(dims.values()) > total:
                        break
                    if dims == target and obj not in out:
                        out.append(obj)
                    k += direction
        return out

    def identify(self, rep: Representation) -> Optional[BlockObject]:
        if not same_presentation(rep.presentation, self.presentation()) or rep.is_zero():
            return None
        for candidate in self._candidates(rep.dim_vector()):
            if is_isomorphic(rep, self.realize(candidate)).isomorphic:
                return candidate
        return None


def default_margin(window: int, depth: int = 2) -> int:
    return max(1, min(2 * depth + 2, window - 1))


# --- almost split sequences ---


def almost_split(fam: BlockFamily, obj: BlockObject) -> SymSequence:
    if isinstance(obj, InjectiveLabel):
        raise InjectiveInput(f"No almost split sequence starts at {obj.label()}")
    return sym_sequence(obj.k - 1, obj.n)


def almost_split_ending(fam: BlockFamily, obj: BlockObject) -> SymSequence:
    if isinstance(obj, InjectiveLabel):
        raise InjectiveInput(f"No almost split sequence ends at {obj.label()}")
    return sym_sequence(obj.k + 1, obj.n)


def realize_sequence(fam: BlockFamily, seq: SymSequence) -> Optional[ShortExactSeq]:
    middle = direct_sum(*(fam.realize(m) for m in seq.middle))
    return realize_ses(fam.realize(seq.left), middle, fam.realize(seq.right))


def _row(fam: BlockFamily, check: str, subject: str, expected: str, observed: str, passed: bool, note=None) -> CheckResult:
    return CheckResult(fam.family_name, check, subject, expected, observed, passed, note)


def _iso_row(fam: BlockFamily, check: str, subject: str, expected: str, left: Representation, right: Representation) -> CheckResult:
    verdict = is_isomorphic(left, right)
    observed = "iso" if verdict.isomorphic else (verdict.reason or "not iso")
    return _row(fam, check, subject, expected, observed, verdict.isomorphic)


def _sequence_checks(fam: BlockFamily, seq: SymSequence) -> List[CheckResult]:
    subject = seq.text()
    try:
        for term in seq.terms():
            fam.require_window(term)
        left, right = fam.realize(seq.left), fam.realize(seq.right)
        middle_dims: Dict[int, int] = {}
        for term in seq.middle:
            for v, d in fam.dim_vector(term).items():
                middle_dims[v] = middle_dims.get(v, 0) + d
        ends = dict(left.dim_vector())
        for v, d in right.dim_vector().items():
            ends[v] = ends.get(v, 0) + d
        rows = [_row(fam, "dim_additivity", subject, str(sorted(middle_dims.items())), str(sorted(ends.items())), ends == middle_dims)]
        realized = realize_sequence(fam, seq)
        if realized is None:
            rows.append(_row(fam, "almost_split", subject, "exact, non-split", "no exact sequence found", False))
            return rows
        rows.append(
            _row(
                fam,
                "almost_split",
                subject,
                "exact, non-split",
                "exact, " + ("non-split" if realized.non_split else "split"),
                bool(realized.non_split),
            )
        )
        rows.append(_iso_row(fam, "cosyzygy2_endpoint", subject, "right = O^-2(left)", right, functors.syzygy_power(left, -2)))
        rows.append(_iso_row(fam, "dtr_endpoint", subject, "right = DTr(left)", right, functors.dtr(left)))
        rows.append(
            _row(fam, "star_exact", subject, "exact", "exact" if functors.check_star_exact(realized) else "not exact", functors.check_star_exact(realized))
        )
        return rows
    except WindowExceeded as exc:
        return [_row(fam, "almost_split", subject, "computable", "window exceeded", False, str(exc))]


def verify_sequences(
    fam: BlockFamily, i_range: Sequence[int], n_range: Sequence[int], threads: int = 1
) -> Report:
    sequences = [sym_sequence(i, n) for i in i_range for n in n_range]
    fam.presentation().algebra
    tasks = [lambda s=s: _sequence_checks(fam, s) for s in sequences]
    report = Report.collect(f"{fam.family_name} almost split sequences", run_batch(tasks, threads))
    logger.info(report.summary())
    return report


# --- object-level checks ---


def check_injectives(fam: BlockFamily, n_range: Sequence[int]) -> Report:
    pres = fam.presentation()
    rows: List[CheckResult] = []
    for n in n_range:
        subject = f"I({n})"
        inj = fam.injective(n)
        expected = {0: 2, 1: 1} if n == 0 else {n - 1: 1, n: 2, n + 1: 1}
        observed = inj.dim_vector()
        rows.append(_row(fam, "injective_dims", subject, str(sorted(expected.items())), str(sorted(observed.items())), observed == expected))
        rows.append(_iso_row(fam, "injective_projective", subject, f"P({n})", inj, functors.projective(pres, n)))
        rows.append(_iso_row(fam, "injective_top", subject, f"S({n})", functors.top(inj)[0], simple(pres, n)))
        rows.append(_iso_row(fam, "injective_socle", subject, f"S({n})", functors.socle(inj)[0], simple(pres, n)))
        rad = functors.radical(inj)[0]
        heart = functors.cokernel(functors.socle(rad)[1])[0]
        neighbours = [simple(pres, v) for v in (n - 1, n + 1) if v >= 0]
        rows.append(_iso_row(fam, "injective_heart", subject, " + ".join(s.name for s in neighbours), heart, direct_sum(*neighbours)))
    return Report(f"{fam.family_name} injectives", tuple(rows))


def radical_sequence(fam: BlockFamily, n: int) -> Tuple[Optional[ShortExactSeq], Report]:
    """0 -> rad I(n) -> rad I(n)/soc I(n) + I(n) -> I(n)/soc I(n) -> 0, built from socle and radical."""
    inj = fam.injective(n)
    rad = functors.radical(inj)[0].relabel(f"rad I({n})")
    heart = functors.cokernel(functors.socle(rad)[1])[0].relabel(f"rad/soc I({n})")
    upper = functors.cokernel(functors.socle(inj)[1])[0].relabel(f"I({n})/soc")
    realized = realize_ses(rad, direct_sum(heart, inj), upper)
    subject = f"n={n}"
    rows = [
        _row(
            fam,
            "radical_sequence",
            subject,
            "exact, non-split",
            "no exact sequence found" if realized is None else "exact, " + ("non-split" if realized.non_split else "split"),
            realized is not None and bool(realized.non_split),
        ),
        _iso_row(fam, "radical_sequence", subject, "rad I = O S", rad, fam.realize(StringObject(1, n))),
        _iso_row(fam, "radical_sequence", subject, "I/soc = O^-1 S", upper, fam.realize(StringObject(-1, n))),
    ]
    return realized, Report(f"{fam.family_name} radical sequence {n}", tuple(rows))


def _object_checks(fam: BlockFamily, obj: StringObject) -> List[CheckResult]:
    subject = obj.label()
    try:
        rep = fam.realize(obj)
        rows = [
            _iso_row(fam, "omega_inverse", subject, subject, functors.cosyzygy(functors.syzygy(rep)), rep),
            _iso_row(fam, "omega_inverse", subject, subject, functors.syzygy(functors.cosyzygy(rep)), rep),
            _iso_row(fam, "dtr_cosyzygy2", subject, "DTr = O^-2", functors.dtr(rep), functors.syzygy_power(rep, -2)),
        ]
        if obj.k == 1:
            rows.append(_iso_row(fam, "syzygy_radical", subject, f"rad I({obj.n})", rep, functors.radical(fam.injective(obj.n))[0]))
        return rows
    except WindowExceeded as exc:
        return [_row(fam, "omega_inverse", subject, "computable", "window exceeded", False, str(exc))]


def _distinctness(fam: BlockFamily, objects: Sequence[StringObject]) -> List[CheckResult]:
    rows: List[CheckResult] = []
    reps = [(obj, fam.realize(obj)) for obj in objects]
    for a in range(len(reps)):
        for b in range(a + 1, len(reps)):
            (x, mx), (y, my) = reps[a], reps[b]
            if mx.dim_vector() != my.dim_vector():
                continue
            verdict = is_isomorphic(mx, my)
            rows.append(
                _row(fam, "distinct", f"{x.label()} vs {y.label()}", "not iso", "iso" if verdict.isomorphic else "not iso", not verdict.isomorphic)
            )
    return rows


def _width_growth(fam: BlockFamily, objects: Sequence[StringObject]) -> List[CheckResult]:
    """Support of O^k S(n) gains one vertex at each end per step while it stays clear of vertex 0."""
    rows: List[CheckResult] = []
    for obj in objects:
        if obj.k == 0 or obj.n < abs(obj.k):
            continue
        inner, outer = fam.dim_vector(obj.omega(-1 if obj.k > 0 else 1)), fam.dim_vector(obj)
        grown = len(outer) == len(inner) + 2
        rows.append(_row(fam, "width_growth", obj.label(), str(len(inner) + 2), str(len(outer)), grown))
    return rows


def verify_objects(fam: BlockFamily, k_max: int, n_max: int, threads: int = 1) -> Report:
    objects = [StringObject(k, n) for n in range(n_max + 1) for k in range(-k_max, k_max + 1)]
    for obj in objects:
        fam.require_window(obj)
    tasks = [lambda o=o: _object_checks(fam, o) for o in objects]
    chunks = run_batch(tasks, threads)
    chunks.append(_distinctness(fam, objects))
    chunks.append(_width_growth(fam, objects))
    report = Report.collect(f"{fam.family_name} objects", chunks)
    logger.info(report.summary())
    return report


def verify(fam: BlockFamily, k_max: int, n_max: int, threads: int = 1) -> Report:
    """Injectives, both sequence shapes and object-level functor identities."""
    chunks = [check_injectives(fam, range(n_max + 1)).rows]
    for n in range(n_max + 1):
        chunks.append(radical_sequence(fam, n)[1].rows)
    chunks.append(verify_sequences(fam, range(-k_max + 1, k_max), range(n_max + 1), threads).rows)
    chunks.append(verify_objects(fam, k_max, n_max, threads).rows)
    return Report.collect(f"{fam.family_name} verification", chunks)


# --- symmetry ---


def is_loop_class(path: Path) -> bool:
    return path.length == 2 and path.source == path.target


def symmetrizing_form(fam: BlockFamily, combination: Dict[Path, Fraction]) -> Fraction:
    """phi: 1 on the loop class at each interior vertex, 0 on every other class."""
    interior = set(fam.interior)
    return sum(
        (c for p, c in combination.items() if is_loop_class(p) and p.source in interior),
        Fraction(0),
    )


def gram_matrix(fam: BlockFamily) -> Tuple[Tuple[Path, ...], RatMatrix]:
    algebra = fam.presentation().algebra
    interior = set(fam.interior)
    basis = tuple(p for p in algebra.basis if p.source in interior and p.target in interior)
    rows = [[symmetrizing_form(fam, algebra.multiply(x, y)) for y in basis] for x in basis]
    return basis, RatMatrix.from_rows(rows, cols=len(basis))


def check_symmetric(fam: BlockFamily, k_max: int, n_max: int, threads: int = 1) -> Report:
    basis, gram = gram_matrix(fam)
    subject = f"interior [0,{fam.interior[-1]}]"
    symmetric = gram == gram.transpose()
    full = rank(gram)
    rows = [
        _row(fam, "gram_symmetric", subject, "symmetric", "symmetric" if symmetric else "not symmetric", symmetric),
        _row(fam, "gram_rank", subject, str(len(basis)), str(full), full == len(basis)),
    ]
    objects: List[BlockObject] = [StringObject(k, n) for n in range(n_max + 1) for k in range(-k_max, k_max + 1)]
    objects += [InjectiveLabel(n) for n in range(n_max + 1)]
    for obj in objects:
        fam.require_window(obj)

    def nakayama_row(obj: BlockObject) -> List[CheckResult]:
        rep = fam.realize(obj)
        return [_iso_row(fam, "nakayama_identity", obj.label(), obj.label(), functors.nakayama(rep), rep)]

    chunks = [rows] + run_batch([lambda o=o: nakayama_row(o) for o in objects], threads)
    report = Report.collect(f"{fam.family_name} symmetry", chunks)
    logger.info(report.summary())
    return report


# --- AR quiver ---


def _neighbours(obj: BlockObject) -> List[BlockObject]:
    if isinstance(obj, InjectiveLabel):
        return [StringObject(1, obj.n), StringObject(-1, obj.n)]
    out: List[BlockObject] = []
    for step in (-1, 1):
        for n in (obj.n - 1, obj.n + 1):
            if n >= 0:
                out.append(StringObject(obj.k + step, n))
    if abs(obj.k) == 1:
        out.append(InjectiveLabel(obj.n))
    return out


def ar_quiver(fam: BlockFamily, k_max: int, n_max: int) -> ARQuiver:
    objects: List[BlockObject] = []
    layout: Dict[str, Tuple[int, int]] = {}
    for n in range(n_max + 1):
        for col in range(-k_max, k_max + 1):
            obj = StringObject(-col, n)
            objects.append(obj)
            layout[obj.node_id()] = (n, col)
            if col == 0:
                objects.append(InjectiveLabel(n))
                layout[InjectiveLabel(n).node_id()] = (n, 0)
    present = set(objects)
    for obj in objects:
        fam.require_window(obj)
    nodes = [
        ARNode(
            node_id=obj.node_id(),
            label=obj.label(),
            dim_total=fam.realize(obj).total_dim,
            injective=isinstance(obj, InjectiveLabel),
            incomplete=any(nb not in present for nb in _neighbours(obj)),
        )
        for obj in objects
    ]
    arrows = []
    for i in range(-k_max - 1, k_max + 1):
        for n in range(n_max + 1):
            seq = sym_sequence(i, n)
            for m in seq.middle:
                if seq.left in present and m in present:
                    arrows.append((seq.left.node_id(), m.node_id()))
                if m in present and seq.right in present:
                    arrows.append((m.node_id(), seq.right.node_id()))
    translation = [
        (obj.node_id(), obj.omega(-2).node_id())
        for obj in objects
        if isinstance(obj, StringObject) and obj.omega(-2) in present
    ]
    return ARQuiver.build(nodes, arrows, translation, layout)


# --- census ---


def orbit_census(fam: BlockFamily, samples: int, seed: int) -> Report:
    """Decompose pseudo-random cokernels of maps between projectives and name every summand."""
    rng = random.Random(seed)
    pres = fam.presentation()
    interior = fam.interior
    rows: List[CheckResult] = []
    unidentified = 0
    for sample in range(samples):
        tops = sorted(rng.choice(interior) for _ in range(rng.randint(1, 2)))
        relations = sorted(rng.choice(interior) for _ in range(rng.randint(1, 2)))
        upper = direct_sum(*(functors.projective(pres, v) for v in tops))
        lower = direct_sum(*(functors.projective(pres, v) for v in relations))
        basis = hom_basis(lower, upper)
        coefficients = [rng.randint(-2, 2) for _ in basis]
        module = functors.cokernel(linear_combination(lower, upper, basis, coefficients))[0]
        decomposition = fitting_decompose(module)
        names = []
        for summand in decomposition.representations():
            found = fam.identify(summand)
            if found is None:
                unidentified += 1
                names.append(f"?{sorted(summand.dim_vector().items())}")
            else:
                names.append(found.label())
        subject = f"coker P{tops} <- P{relations} #{sample}"
        passed = all(not name.startswith("?") for name in names)
        note = "decomposition budget-limited" if decomposition.budget_limited else None
        rows.append(_row(fam, "census", subject, "all summands named", " + ".join(names) or "0", passed, note))
    rows.append(_row(fam, "census", "total", "0 unidentified", f"{unidentified} unidentified", unidentified == 0))
    return Report(f"{fam.family_name} orbit census (seed {seed})", tuple(rows))
