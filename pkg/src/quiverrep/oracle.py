"""
Isomorphism testing, Krull-Schmidt decomposition and short exact sequence
witnesses, all by exact linear algebra plus a bounded, deterministic search.
"""

import itertools
import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional, Tuple

from src import runtime_config
from src.exactlin import RatMatrix, solve
from src.quiverrep.functors import cokernel, image, kernel, radical_series, socle_series
from src.quiverrep.homs import HomSpace, hom_basis
from src.quiverrep.representation import (
    Morphism,
    Representation,
    ShortExactSeq,
    identity,
    linear_combination,
    require_same_presentation,
    zero_morphism,
)

logger = logging.getLogger(__name__)

GENERIC_CANDIDATES = 3
GENERIC_BOUND = 10**6


@dataclass(frozen=True)
class SearchBudget:
    max_candidates: int
    coefficients: Tuple[int, ...]
    max_terms: int


@lru_cache(maxsize=1)
def default_budget() -> SearchBudget:
    settings = runtime_config.load_settings()
    return SearchBudget(
        max_candidates=int(settings["iso_budget"]),
        coefficients=tuple(int(c) for c in settings["combination_coefficients"] if int(c)),
        max_terms=int(settings["max_combination_terms"]),
    )


def candidate_coefficients(size: int, budget: Optional[SearchBudget] = None) -> Iterator[Tuple[int, ...]]:
    """Coefficient vectors to try, in a fixed order.

    Basis elements first, then a few generic vectors with large entries
    drawn from a generator seeded by ``size``, then combinations of up to
    ``max_terms`` basis elements with nonzero coefficients whose first
    coefficient is positive (a nonzero scalar multiple never changes
    kernel, image or invertibility).
    """
    budget = budget or default_budget()
    emitted = 0
    seen = set()

    def emit(vec: Tuple[int, ...]):
        nonlocal emitted
        if vec in seen:
            return False
        seen.add(vec)
        emitted += 1
        return True

    for k in range(size):
        vec = tuple(1 if i == k else 0 for i in range(size))
        if emitted >= budget.max_candidates:
            return
        if emit(vec):
            yield vec
    if size > 1:
        rng = random.Random(size)
        for _ in range(GENERIC_CANDIDATES):
            if emitted >= budget.max_candidates:
                return
            vec = tuple(rng.randint(1, GENERIC_BOUND) for _ in range(size))
            if emit(vec):
                yield vec
    positive = [c for c in budget.coefficients if c > 0]
    for terms in range(2, min(budget.max_terms, size) + 1):
        for support in itertools.combinations(range(size), terms):
            for lead in positive:
                for rest in itertools.product(budget.coefficients, repeat=terms - 1):
                    if emitted >= budget.max_candidates:
                        return
                    vec = [0] * size
                    vec[support[0]] = lead
                    for index, value in zip(support[1:], rest):
                        vec[index] = value
                    vec = tuple(vec)
                    if emit(vec):
                        yield vec


def candidate_count(size: int, budget: Optional[SearchBudget] = None) -> int:
    return sum(1 for _ in candidate_coefficients(size, budget))


# --- isomorphism ---


@dataclass(frozen=True, eq=False)
class IsoVerdict:
    isomorphic: bool
    reason: Optional[str]
    certificate: Optional[Morphism] = None
    budget_limited: bool = False

    def __bool__(self) -> bool:
        return self.isomorphic


def is_isomorphic(m: Representation, n: Representation, budget: Optional[SearchBudget] = None) -> IsoVerdict:
    require_same_presentation(m, n)
    if m.dim_vector() != n.dim_vector():
        return IsoVerdict(False, "dimension vectors differ")
    if m is n or m.same_data(n):
        return IsoVerdict(True, None, Morphism(m, n, dict(identity(m).blocks), check=False))
    if m.is_zero():
        return IsoVerdict(True, None, zero_morphism(m, n))
    if radical_series(m) != radical_series(n):
        return IsoVerdict(False, "radical series differ")
    if socle_series(m) != socle_series(n):
        return IsoVerdict(False, "socle series differ")
    forward = hom_basis(m, n)
    if not forward:
        return IsoVerdict(False, "Hom(m, n) = 0")
    end_m = len(hom_basis(m, m))
    end_n = len(hom_basis(n, n))
    if end_m != end_n:
        return IsoVerdict(False, f"dim End differs ({end_m} vs {end_n})")
    if len(forward) != end_m:
        return IsoVerdict(False, f"dim Hom(m, n) = {len(forward)} but dim End(m) = {end_m}")
    for coefficients in candidate_coefficients(len(forward), budget):
        f = linear_combination(m, n, forward, coefficients)
        if f.is_isomorphism():
            return IsoVerdict(True, None, f)
    logger.warning("No invertible intertwiner found within budget for %s vs %s", m.name, n.name)
    return IsoVerdict(False, "no invertible intertwiner within budget", budget_limited=True)


# --- decomposition ---


@dataclass(frozen=True, eq=False)
class Summand:
    rep: Representation
    end_dim: int


@dataclass(frozen=True, eq=False)
class Decomposition:
    summands: Tuple[Summand, ...]
    budget_limited: bool

    def representations(self) -> Tuple[Representation, ...]:
        return tuple(s.rep for s in self.summands)

    def dim_vectors(self) -> List[Tuple[Tuple[int, int], ...]]:
        return sorted(tuple(sorted(s.rep.dim_vector().items())) for s in self.summands)


def _fitting_split(m: Representation, budget: Optional[SearchBudget]) -> Tuple[Optional[Tuple[Representation, Representation]], int, bool]:
    ends = hom_basis(m, m)
    if len(ends) <= 1:
        return None, len(ends), False
    total = m.total_dim
    tried = 0
    for coefficients in candidate_coefficients(len(ends), budget):
        tried += 1
        f = linear_combination(m, m, ends, coefficients)
        stable = f.power(total)
        ker, _ = kernel(stable)
        if 0 < ker.total_dim < total:
            img, _ = image(stable)
            logger.debug("Fitting split of %s: %d + %d", m.name or "?", ker.total_dim, img.total_dim)
            return (ker, img), len(ends), False
    return None, len(ends), tried >= (budget or default_budget()).max_candidates


def fitting_decompose(m: Representation, budget: Optional[SearchBudget] = None) -> Decomposition:
    """Split ``m`` by Fitting's lemma until no enumerated endomorphism splits a piece."""
    summands: List[Summand] = []
    limited = False
    stack = [m]
    while stack:
        piece = stack.pop()
        if piece.is_zero():
            continue
        split, end_dim, piece_limited = _fitting_split(piece, budget)
        if split is None:
            summands.append(Summand(piece, end_dim))
            limited = limited or piece_limited
            continue
        stack.extend(reversed(split))
    summands.sort(key=lambda s: (tuple(sorted(s.rep.dim_vector().items())), s.end_dim))
    return Decomposition(tuple(summands), limited)


# --- short exact sequences ---


def is_split(seq: ShortExactSeq) -> bool:
    """Exact test: the sequence splits iff surj has a section."""
    space = HomSpace(seq.right, seq.middle)
    if not space.basis:
        return seq.right.is_zero()
    columns = [h.then(seq.surj).flatten() for h in space.basis]
    target = identity(seq.right).flatten()
    matrix = RatMatrix.from_columns(columns, rows=len(target))
    return solve(matrix, RatMatrix(len(target), 1, target)) is not None


def realize_ses(
    a: Representation, b: Representation, c: Representation, budget: Optional[SearchBudget] = None
) -> Optional[ShortExactSeq]:
    require_same_presentation(a, b, c)
    for v in b.presentation.quiver.vertices:
        if b.dim(v) != a.dim(v) + c.dim(v):
            return None
    basis = hom_basis(a, b)
    if a.is_zero():
        candidates: List[Morphism] = [zero_morphism(a, b)]
    elif not basis:
        return None
    else:
        candidates = (linear_combination(a, b, basis, k) for k in candidate_coefficients(len(basis), budget))
    for f in candidates:
        if not f.is_injective():
            continue
        quotient, projection = cokernel(f)
        verdict = is_isomorphic(quotient, c, budget)
        if not verdict.isomorphic:
            continue
        surj = projection.then(verdict.certificate.retarget(quotient, c))
        seq = ShortExactSeq(a, b, c, f, surj)
        return seq.with_flag(not is_split(seq))
    return None
