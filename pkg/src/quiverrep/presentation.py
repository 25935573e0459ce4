"""
Finite quivers with relations and their path-class bases.

Paths are stored in traversal order: ``Path(0, 2, (0, 1))`` first walks arrow 0
and then arrow 1. Labels are printed right-to-left, so the same path reads
``a1a0`` when arrow 0 is ``a0``.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from src import runtime_config
from src.errors import ContractViolation, RewritingError
from src.exactlin import RatMatrix, ScalarLike, rref, to_scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Arrow:
    arrow_id: int
    source: int
    target: int
    label: str


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[int, ...]
    arrows: Tuple[Arrow, ...]

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise ContractViolation("Quiver vertex ids must be unique")
        known = set(self.vertices)
        seen = set()
        for arrow in self.arrows:
            if arrow.arrow_id in seen:
                raise ContractViolation(f"Duplicate arrow id {arrow.arrow_id}")
            seen.add(arrow.arrow_id)
            if arrow.source not in known or arrow.target not in known:
                raise ContractViolation(f"Arrow {arrow.label} has an undeclared endpoint")

    @cached_property
    def _arrow_index(self) -> Dict[int, Arrow]:
        return {a.arrow_id: a for a in self.arrows}

    def arrow(self, arrow_id: int) -> Arrow:
        try:
            return self._arrow_index[arrow_id]
        except KeyError:
            raise ContractViolation(f"Unknown arrow id {arrow_id}") from None

    def has_vertex(self, v: int) -> bool:
        return v in self._vertex_set

    @cached_property
    def _vertex_set(self) -> FrozenSet[int]:
        return frozenset(self.vertices)

    def require_vertex(self, v: int) -> None:
        if v not in self._vertex_set:
            raise ContractViolation(f"Unknown vertex {v}")

    @cached_property
    def _outgoing(self) -> Dict[int, Tuple[Arrow, ...]]:
        out: Dict[int, List[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            out[a.source].append(a)
        return {v: tuple(items) for v, items in out.items()}

    @cached_property
    def _incoming(self) -> Dict[int, Tuple[Arrow, ...]]:
        inc: Dict[int, List[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            inc[a.target].append(a)
        return {v: tuple(items) for v, items in inc.items()}

    def outgoing(self, v: int) -> Tuple[Arrow, ...]:
        return self._outgoing[v]

    def incoming(self, v: int) -> Tuple[Arrow, ...]:
        return self._incoming[v]

    def opposite(self) -> "Quiver":
        return Quiver(
            vertices=self.vertices,
            arrows=tuple(Arrow(a.arrow_id, a.target, a.source, _opposite_label(a.label)) for a in self.arrows),
        )


def _opposite_label(label: str) -> str:
    return label[:-1] if label.endswith("'") else label + "'"


@dataclass(frozen=True, order=False)
class Path:
    source: int
    target: int
    arrows: Tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    def sort_key(self) -> Tuple[int, Tuple[int, ...], int]:
        return (len(self.arrows), self.arrows, self.source)

    def then(self, other: "Path") -> "Path":
        if self.target != other.source:
            raise ContractViolation(f"Paths {self} and {other} are not composable")
        return Path(self.source, other.target, self.arrows + other.arrows)

    def label(self, quiver: Quiver) -> str:
        if not self.arrows:
            return f"e{self.source}"
        return "".join(quiver.arrow(a).label for a in reversed(self.arrows))

    def reversed(self) -> "Path":
        return Path(self.target, self.source, tuple(reversed(self.arrows)))


def path_from_arrows(quiver: Quiver, arrows: Sequence[int]) -> Path:
    if not arrows:
        raise ContractViolation("A path given by arrows needs at least one arrow")
    first = quiver.arrow(arrows[0])
    current = first.target
    for arrow_id in arrows[1:]:
        arrow = quiver.arrow(arrow_id)
        if arrow.source != current:
            raise ContractViolation(f"Arrows {tuple(arrows)} do not compose")
        current = arrow.target
    return Path(first.source, current, tuple(arrows))


@dataclass(frozen=True)
class Relation:
    terms: Tuple[Tuple[Fraction, Tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        if not self.terms:
            raise ContractViolation("A relation needs at least one term")
        normalized = tuple((to_scalar(c), tuple(p)) for c, p in self.terms)
        if any(c == 0 for c, _ in normalized):
            raise ContractViolation("Relation terms must have nonzero coefficients")
        if any(not p for _, p in normalized):
            raise ContractViolation("Relation paths must have positive length")
        object.__setattr__(self, "terms", normalized)

    @classmethod
    def monomial(cls, arrows: Sequence[int]) -> "Relation":
        return cls(((Fraction(1), tuple(arrows)),))

    @classmethod
    def binomial(cls, left: Sequence[int], right: Sequence[int], coefficient: ScalarLike = -1) -> "Relation":
        """``left + coefficient * right``; the default identifies the two paths."""
        return cls(((Fraction(1), tuple(left)), (to_scalar(coefficient), tuple(right))))

    def reversed(self) -> "Relation":
        return Relation(tuple((c, tuple(reversed(p))) for c, p in self.terms))

    def endpoints(self, quiver: Quiver) -> Tuple[int, int]:
        ends = {(path.source, path.target) for path in (path_from_arrows(quiver, p) for _, p in self.terms)}
        if len(ends) != 1:
            raise ContractViolation("Relation terms must share source and target")
        return next(iter(ends))


@dataclass(frozen=True)
class AlgebraPresentation:
    quiver: Quiver
    relations: Tuple[Relation, ...]
    nilpotency_bound: int
    projective_safe: Optional[FrozenSet[int]] = None
    injective_safe: Optional[FrozenSet[int]] = None
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.nilpotency_bound < 1:
            raise ContractViolation("nilpotency_bound must be positive")
        everything = frozenset(self.quiver.vertices)
        for attr in ("projective_safe", "injective_safe"):
            value = getattr(self, attr)
            value = everything if value is None else frozenset(value)
            if not value <= everything:
                raise ContractViolation(f"{attr} names vertices outside the quiver")
            object.__setattr__(self, attr, value)
        for relation in self.relations:
            relation.endpoints(self.quiver)

    def opposite(self) -> "AlgebraPresentation":
        cached = self.__dict__.get("_opposite")
        if cached is None:
            cached = AlgebraPresentation(
                quiver=self.quiver.opposite(),
                relations=tuple(r.reversed() for r in self.relations),
                nilpotency_bound=self.nilpotency_bound,
                projective_safe=self.injective_safe,
                injective_safe=self.projective_safe,
                name=_opposite_name(self.name),
            )
            cached.__dict__["_opposite"] = self
            self.__dict__["_opposite"] = cached
        return cached

    @cached_property
    def algebra(self) -> "PathAlgebra":
        return PathAlgebra(self)

    def path_basis(self) -> Tuple[Path, ...]:
        return self.algebra.basis


def _opposite_name(name: str) -> str:
    if name.endswith("^op"):
        return name[: -len("^op")]
    return f"{name}^op" if name else "op"


def same_presentation(a: AlgebraPresentation, b: AlgebraPresentation) -> bool:
    return a is b or a == b


def path_basis(pres: AlgebraPresentation) -> Tuple[Path, ...]:
    return pres.algebra.basis


class PathAlgebra:
    """Basis of path classes of a bound quiver plus the rewriting to that basis.

    For every (source, target) block the ideal generated by the relations is
    spanned by the elements ``u * r * v``; row reducing those with the largest
    paths first makes the pivot paths the leading terms, and the remaining
    paths form the basis.
    """

    def __init__(self, pres: AlgebraPresentation) -> None:
        self.presentation = pres
        quiver = pres.quiver
        bound = pres.nilpotency_bound
        cap = int(runtime_config.load_settings()["max_path_classes"])

        by_source: Dict[int, List[Path]] = {v: [Path(v, v)] for v in quiver.vertices}
        all_paths: List[Path] = [Path(v, v) for v in quiver.vertices]
        frontier = list(all_paths)
        for _ in range(bound - 1):
            grown: List[Path] = []
            for path in frontier:
                for arrow in quiver.outgoing(path.target):
                    longer = Path(path.source, arrow.target, path.arrows + (arrow.arrow_id,))
                    grown.append(longer)
                    by_source[path.source].append(longer)
            all_paths.extend(grown)
            if len(all_paths) > cap:
                raise RewritingError(
                    f"More than {cap} paths below the nilpotency bound; no finite rewriting within budget"
                )
            frontier = grown
        by_target: Dict[int, List[Path]] = {v: [] for v in quiver.vertices}
        for path in all_paths:
            by_target[path.target].append(path)

        blocks: Dict[Tuple[int, int], List[Path]] = {}
        for path in all_paths:
            blocks.setdefault((path.source, path.target), []).append(path)

        generators: Dict[Tuple[int, int], List[Dict[Path, Fraction]]] = {}
        for relation in pres.relations:
            r_source, r_target = relation.endpoints(quiver)
            for before in by_target[r_source]:
                for after in by_source[r_target]:
                    element: Dict[Path, Fraction] = {}
                    for coefficient, arrows in relation.terms:
                        if before.length + len(arrows) + after.length >= bound:
                            continue
                        key = Path(before.source, after.target, before.arrows + arrows + after.arrows)
                        element[key] = element.get(key, Fraction(0)) + coefficient
                    element = {p: c for p, c in element.items() if c}
                    if element:
                        generators.setdefault((before.source, after.target), []).append(element)

        self._normal_forms: Dict[Path, Dict[Path, Fraction]] = {}
        basis: List[Path] = []
        for key in sorted(blocks):
            paths = sorted(blocks[key], key=Path.sort_key, reverse=True)
            rows = generators.get(key, [])
            if not rows:
                basis.extend(paths)
                continue
            column_of = {p: c for c, p in enumerate(paths)}
            matrix = RatMatrix.from_rows(
                [[row.get(p, Fraction(0)) for p in paths] for row in rows], cols=len(paths)
            )
            reduced, pivots, _ = rref(matrix)
            pivot_set = set(pivots)
            survivors = [p for p in paths if column_of[p] not in pivot_set]
            basis.extend(survivors)
            for row_index, col in enumerate(pivots):
                form = {}
                for p in survivors:
                    value = reduced[row_index, column_of[p]]
                    if value:
                        form[p] = -value
                self._normal_forms[paths[col]] = form

        self.basis: Tuple[Path, ...] = tuple(sorted(basis, key=Path.sort_key))
        self.index: Dict[Path, int] = {p: k for k, p in enumerate(self.basis)}
        self._by_source: Dict[int, Tuple[Path, ...]] = {
            v: tuple(p for p in self.basis if p.source == v) for v in quiver.vertices
        }
        self._by_target: Dict[int, Tuple[Path, ...]] = {
            v: tuple(p for p in self.basis if p.target == v) for v in quiver.vertices
        }
        logger.debug("Path basis for %s: %d classes", pres.name or "presentation", len(self.basis))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def from_source(self, v: int) -> Tuple[Path, ...]:
        return self._by_source[v]

    def to_target(self, v: int) -> Tuple[Path, ...]:
        return self._by_target[v]

    def between(self, source: int, target: int) -> Tuple[Path, ...]:
        return tuple(p for p in self._by_source[source] if p.target == target)

    def reduce(self, path: Path) -> Dict[Path, Fraction]:
        """Coordinates of a path class on the basis; empty when the class is zero."""
        if path.length >= self.presentation.nilpotency_bound:
            return {}
        if path in self.index:
            return {path: Fraction(1)}
        if path in self._normal_forms:
            return dict(self._normal_forms[path])
        raise ContractViolation(f"{path} is not a path of the quiver")

    def reduce_combination(self, combination: Mapping[Path, Fraction]) -> Dict[Path, Fraction]:
        out: Dict[Path, Fraction] = {}
        for path, coefficient in combination.items():
            for basis_path, value in self.reduce(path).items():
                out[basis_path] = out.get(basis_path, Fraction(0)) + coefficient * value
        return {p: c for p, c in out.items() if c}

    def multiply(self, first: Path, then: Path) -> Dict[Path, Fraction]:
        if first.target != then.source:
            return {}
        return self.reduce(first.then(then))

    def classes_equal(self, left: Iterable[int], right: Iterable[int]) -> bool:
        quiver = self.presentation.quiver
        return self.reduce(path_from_arrows(quiver, tuple(left))) == self.reduce(
            path_from_arrows(quiver, tuple(right))
        )
