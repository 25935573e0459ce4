"""
Finite-dimensional representations of a bound quiver and the maps between them.

A right comodule is stored as a representation: a vector space per vertex and,
for every arrow ``u -> v``, a matrix of shape ``dim(v) x dim(u)``.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from src.errors import ContractViolation, PresentationMismatch, RelationViolation
from src.exactlin import RatMatrix, ScalarLike, block_diag, inverse, rank, to_scalar
from src.quiverrep.presentation import AlgebraPresentation, Path, path_from_arrows, same_presentation

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Representation:
    presentation: AlgebraPresentation
    dims: Mapping[int, int]
    action: Mapping[int, RatMatrix]
    name: str = ""
    check: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        pres = self.presentation
        quiver = pres.quiver
        dims: Dict[int, int] = {}
        for v in quiver.vertices:
            d = int(self.dims.get(v, 0))
            if d < 0:
                raise ContractViolation(f"Negative dimension at vertex {v}")
            dims[v] = d
        for v in self.dims:
            quiver.require_vertex(v)
        action: Dict[int, RatMatrix] = {}
        for arrow in quiver.arrows:
            shape = (dims[arrow.target], dims[arrow.source])
            matrix = self.action.get(arrow.arrow_id)
            if matrix is None:
                matrix = RatMatrix.zeros(*shape)
            elif matrix.shape != shape:
                raise ContractViolation(
                    f"Arrow {arrow.label} needs a {shape[0]}x{shape[1]} matrix, got {matrix.rows}x{matrix.cols}"
                )
            action[arrow.arrow_id] = matrix
        for arrow_id in self.action:
            quiver.arrow(arrow_id)
        object.__setattr__(self, "dims", MappingProxyType(dims))
        object.__setattr__(self, "action", MappingProxyType(action))
        object.__setattr__(self, "_path_cache", {})
        if self.check:
            self._check_relations()

    # --- structure ---

    def dim(self, v: int) -> int:
        return self.dims[v]

    def dim_vector(self) -> Dict[int, int]:
        return {v: d for v, d in self.dims.items() if d}

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def support(self) -> Tuple[int, ...]:
        return tuple(v for v in self.presentation.quiver.vertices if self.dims[v])

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_matrix(self, path: Path) -> RatMatrix:
        cache = self.__dict__["_path_cache"]
        found = cache.get(path)
        if found is not None:
            return found
        matrix = RatMatrix.identity(self.dims[path.source])
        for arrow_id in path.arrows:
            matrix = self.action[arrow_id] @ matrix
        cache[path] = matrix
        return matrix

    def evaluate(self, combination: Mapping[Path, Fraction], source: int, target: int) -> RatMatrix:
        out = RatMatrix.zeros(self.dims[target], self.dims[source])
        for path, coefficient in combination.items():
            out = out + self.path_matrix(path).scale(coefficient)
        return out

    def _check_relations(self) -> None:
        pres = self.presentation
        quiver = pres.quiver
        for relation in pres.relations:
            source, target = relation.endpoints(quiver)
            if not self.dims[source] or not self.dims[target]:
                continue
            total = RatMatrix.zeros(self.dims[target], self.dims[source])
            for coefficient, arrows in relation.terms:
                total = total + self.path_matrix(path_from_arrows(quiver, arrows)).scale(coefficient)
            if not total.is_zero():
                raise RelationViolation(f"{self.name or 'representation'} violates a relation at {source}->{target}")
        bound = pres.nilpotency_bound
        frontier: List[Tuple[int, RatMatrix]] = [
            (v, RatMatrix.identity(self.dims[v])) for v in quiver.vertices if self.dims[v]
        ]
        for _ in range(bound):
            grown: List[Tuple[int, RatMatrix]] = []
            for vertex, matrix in frontier:
                for arrow in quiver.outgoing(vertex):
                    if not self.dims[arrow.target]:
                        continue
                    product = self.action[arrow.arrow_id] @ matrix
                    if not product.is_zero():
                        grown.append((arrow.target, product))
            frontier = grown
            if not frontier:
                return
        raise RelationViolation(f"{self.name or 'representation'} has a nonzero path of length {bound}")

    def relabel(self, name: str) -> "Representation":
        return Representation(self.presentation, self.dims, self.action, name=name, check=False)

    def same_data(self, other: "Representation") -> bool:
        return (
            same_presentation(self.presentation, other.presentation)
            and dict(self.dims) == dict(other.dims)
            and all(self.action[a] == other.action[a] for a in self.action)
        )

    def __repr__(self) -> str:
        dims = " ".join(f"{v}:{d}" for v, d in sorted(self.dim_vector().items()))
        return f"Representation({self.name or '?'}; {dims or '0'})"


def require_same_presentation(*reps: Representation) -> AlgebraPresentation:
    pres = reps[0].presentation
    for rep in reps[1:]:
        if not same_presentation(pres, rep.presentation):
            raise PresentationMismatch("Representations live over different presentations")
    return pres


def zero(pres: AlgebraPresentation) -> Representation:
    return Representation(pres, {}, {}, name="0", check=False)


def simple(pres: AlgebraPresentation, v: int) -> Representation:
    pres.quiver.require_vertex(v)
    return Representation(pres, {v: 1}, {}, name=f"S({v})", check=False)


@dataclass(frozen=True, eq=False)
class Morphism:
    source: Representation
    target: Representation
    blocks: Mapping[int, RatMatrix]
    check: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        pres = require_same_presentation(self.source, self.target)
        blocks: Dict[int, RatMatrix] = {}
        for v in pres.quiver.vertices:
            shape = (self.target.dim(v), self.source.dim(v))
            block = self.blocks.get(v)
            if block is None:
                block = RatMatrix.zeros(*shape)
            elif block.shape != shape:
                raise ContractViolation(f"Block at {v} should be {shape[0]}x{shape[1]}, got {block.rows}x{block.cols}")
            blocks[v] = block
        object.__setattr__(self, "blocks", MappingProxyType(blocks))
        if self.check:
            for arrow in pres.quiver.arrows:
                u, w = arrow.source, arrow.target
                left = blocks[w] @ self.source.action[arrow.arrow_id]
                right = self.target.action[arrow.arrow_id] @ blocks[u]
                if left != right:
                    raise RelationViolation(f"Morphism does not intertwine arrow {arrow.label}")

    @property
    def presentation(self) -> AlgebraPresentation:
        return self.source.presentation

    def block(self, v: int) -> RatMatrix:
        return self.blocks[v]

    def then(self, other: "Morphism") -> "Morphism":
        """``other ∘ self``."""
        if other.source is not self.target and not other.source.same_data(self.target):
            raise ContractViolation("Morphisms are not composable")
        return Morphism(
            self.source,
            other.target,
            {v: other.blocks[v] @ self.blocks[v] for v in self.blocks},
            check=False,
        )

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, {v: self.blocks[v] + other.blocks[v] for v in self.blocks}, check=False)

    def scale(self, factor: ScalarLike) -> "Morphism":
        k = to_scalar(factor)
        return Morphism(self.source, self.target, {v: b.scale(k) for v, b in self.blocks.items()}, check=False)

    def power(self, exponent: int) -> "Morphism":
        if self.source is not self.target:
            raise ContractViolation("Only endomorphisms have powers")
        result = identity(self.source)
        base = self
        while exponent:
            if exponent & 1:
                result = result.then(base)
            base = base.then(base)
            exponent >>= 1
        return result

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks.values())

    def rank_vector(self) -> Dict[int, int]:
        return {v: rank(b) for v, b in self.blocks.items() if b.rows and b.cols}

    def is_injective(self) -> bool:
        return all(rank(b) == b.cols for b in self.blocks.values() if b.cols)

    def is_surjective(self) -> bool:
        return all(rank(b) == b.rows for b in self.blocks.values() if b.rows)

    def is_isomorphism(self) -> bool:
        return all(b.is_square() for b in self.blocks.values()) and self.is_injective()

    def inverse(self) -> "Morphism":
        blocks: Dict[int, RatMatrix] = {}
        for v, b in self.blocks.items():
            inv = inverse(b)
            if inv is None:
                raise ContractViolation("Morphism is not invertible")
            blocks[v] = inv
        return Morphism(self.target, self.source, blocks, check=False)

    def flatten(self) -> Tuple[Fraction, ...]:
        out: List[Fraction] = []
        for v in self.presentation.quiver.vertices:
            out.extend(self.blocks[v].entries)
        return tuple(out)

    def retarget(self, source: Representation, target: Representation) -> "Morphism":
        """Same matrices between structurally equal endpoints."""
        return Morphism(source, target, dict(self.blocks), check=False)


def identity(m: Representation) -> Morphism:
    return Morphism(m, m, {v: RatMatrix.identity(d) for v, d in m.dims.items()}, check=False)


def zero_morphism(m: Representation, n: Representation) -> Morphism:
    return Morphism(m, n, {}, check=False)


def compose(second: Morphism, first: Morphism) -> Morphism:
    return first.then(second)


def linear_combination(
    source: Representation, target: Representation, basis: Sequence[Morphism], coefficients: Sequence[ScalarLike]
) -> Morphism:
    blocks = {v: RatMatrix.zeros(target.dim(v), source.dim(v)) for v in source.dims}
    for morphism, coefficient in zip(basis, coefficients):
        k = to_scalar(coefficient)
        if not k:
            continue
        blocks = {v: blocks[v] + morphism.blocks[v].scale(k) for v in blocks}
    return Morphism(source, target, blocks, check=False)


@dataclass(frozen=True, eq=False)
class DirectSum:
    total: Representation
    inclusions: Tuple[Morphism, ...]
    projections: Tuple[Morphism, ...]


def direct_sum_maps(*summands: Representation, name: str = "") -> DirectSum:
    if not summands:
        raise ContractViolation("direct_sum needs at least one summand")
    pres = require_same_presentation(*summands)
    dims = {v: sum(s.dim(v) for s in summands) for v in pres.quiver.vertices}
    action = {
        arrow.arrow_id: block_diag(*(s.action[arrow.arrow_id] for s in summands)) for arrow in pres.quiver.arrows
    }
    total = Representation(
        pres, dims, action, name=name or " + ".join(s.name or "?" for s in summands), check=False
    )
    inclusions: List[Morphism] = []
    projections: List[Morphism] = []
    offsets = {v: 0 for v in pres.quiver.vertices}
    for s in summands:
        inc: Dict[int, RatMatrix] = {}
        proj: Dict[int, RatMatrix] = {}
        for v in pres.quiver.vertices:
            d, big, off = s.dim(v), dims[v], offsets[v]
            entries = [Fraction(0)] * (big * d)
            for k in range(d):
                entries[(off + k) * d + k] = Fraction(1)
            inc[v] = RatMatrix(big, d, tuple(entries))
            proj[v] = inc[v].transpose()
            offsets[v] += d
        inclusions.append(Morphism(s, total, inc, check=False))
        projections.append(Morphism(total, s, proj, check=False))
    return DirectSum(total, tuple(inclusions), tuple(projections))


def direct_sum(*summands: Representation, name: str = "") -> Representation:
    return direct_sum_maps(*summands, name=name).total


@dataclass(frozen=True, eq=False)
class ShortExactSeq:
    left: Representation
    middle: Representation
    right: Representation
    inj: Morphism
    surj: Morphism
    non_split: Optional[bool] = None

    def __post_init__(self) -> None:
        require_same_presentation(self.left, self.middle, self.right)
        if self.inj.source is not self.left or self.inj.target is not self.middle:
            raise ContractViolation("inj must map left to middle")
        if self.surj.source is not self.middle or self.surj.target is not self.right:
            raise ContractViolation("surj must map middle to right")
        for v in self.middle.presentation.quiver.vertices:
            if self.middle.dim(v) != self.left.dim(v) + self.right.dim(v):
                raise ContractViolation(f"Dimensions are not additive at vertex {v}")
        if not self.inj.is_injective():
            raise ContractViolation("Left map has a kernel")
        if not self.surj.is_surjective():
            raise ContractViolation("Right map has a cokernel")
        if not self.inj.then(self.surj).is_zero():
            raise ContractViolation("Sequence is not a complex at the middle term")

    def with_flag(self, non_split: bool) -> "ShortExactSeq":
        return ShortExactSeq(self.left, self.middle, self.right, self.inj, self.surj, non_split)
