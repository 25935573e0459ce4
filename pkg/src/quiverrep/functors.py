"""
Functors on representations: sub/quotient constructions, socle and radical,
projective covers, injective envelopes, syzygies, duality, star, Nakayama,
transpose and the Auslander-Reiten translate.
"""

import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Tuple

from src.errors import ContractViolation, RelationViolation, WindowExceeded
from src.exactlin import (
    RatMatrix,
    column_space_contains,
    complement_columns,
    hstack,
    image_basis,
    inverse,
    nullspace_basis,
    solve,
    vstack,
)
from src.quiverrep.homs import HomSpace
from src.quiverrep.presentation import AlgebraPresentation, Path
from src.quiverrep.representation import (
    Morphism,
    Representation,
    ShortExactSeq,
    direct_sum_maps,
    zero,
    zero_morphism,
)

logger = logging.getLogger(__name__)

Bases = Mapping[int, RatMatrix]


_CACHE_LOCK = threading.RLock()


def _presentation_cache(pres: AlgebraPresentation, key, factory: Callable):
    with _CACHE_LOCK:
        cache = pres.__dict__.setdefault("_functor_cache", {})
        if key not in cache:
            cache[key] = factory()
        return cache[key]


# --- sub and quotient objects ---


def subrepresentation(m: Representation, bases: Bases, name: str = "") -> Tuple[Representation, Morphism]:
    """Subrepresentation spanned at each vertex by the columns of ``bases[v]``."""
    quiver = m.presentation.quiver
    full = {v: bases.get(v, RatMatrix.zeros(m.dim(v), 0)) for v in quiver.vertices}
    action: Dict[int, RatMatrix] = {}
    for arrow in quiver.arrows:
        src, dst = full[arrow.source], full[arrow.target]
        if not src.cols or not dst.cols:
            if src.cols and not (m.action[arrow.arrow_id] @ src).is_zero():
                raise RelationViolation(f"Subspace is not invariant under {arrow.label}")
            continue
        restricted = solve(dst, m.action[arrow.arrow_id] @ src)
        if restricted is None:
            raise RelationViolation(f"Subspace is not invariant under {arrow.label}")
        action[arrow.arrow_id] = restricted
    sub = Representation(m.presentation, {v: b.cols for v, b in full.items()}, action, name=name, check=False)
    return sub, Morphism(sub, m, full, check=False)


@dataclass(frozen=True, eq=False)
class Quotient:
    rep: Representation
    projection: Morphism
    lifts: Mapping[int, RatMatrix]


def quotient_data(m: Representation, bases: Bases, name: str = "") -> Quotient:
    """Quotient by an invariant subspace, with lifts of a basis of the quotient."""
    quiver = m.presentation.quiver
    projections: Dict[int, RatMatrix] = {}
    lifts: Dict[int, RatMatrix] = {}
    for v in quiver.vertices:
        d = m.dim(v)
        sub = bases.get(v, RatMatrix.zeros(d, 0))
        chosen = complement_columns(sub)
        lift = RatMatrix.identity(d).select_columns(chosen)
        change = inverse(hstack(sub, lift))
        if change is None:
            raise ContractViolation(f"Basis at vertex {v} is not linearly independent")
        projections[v] = change.select_rows(range(sub.cols, d))
        lifts[v] = lift
    action = {
        arrow.arrow_id: projections[arrow.target] @ m.action[arrow.arrow_id] @ lifts[arrow.source]
        for arrow in quiver.arrows
    }
    rep = Representation(m.presentation, {v: lifts[v].cols for v in quiver.vertices}, action, name=name, check=False)
    return Quotient(rep, Morphism(m, rep, projections, check=False), lifts)


def quotient_representation(m: Representation, bases: Bases, name: str = "") -> Tuple[Representation, Morphism]:
    q = quotient_data(m, bases, name)
    return q.rep, q.projection


def kernel(f: Morphism) -> Tuple[Representation, Morphism]:
    bases = {v: nullspace_basis(b) for v, b in f.blocks.items()}
    return subrepresentation(f.source, bases, name=f"ker({f.source.name})")


def image(f: Morphism) -> Tuple[Representation, Morphism]:
    bases = {v: image_basis(b) for v, b in f.blocks.items()}
    return subrepresentation(f.target, bases, name=f"im({f.source.name})")


def cokernel(f: Morphism) -> Tuple[Representation, Morphism]:
    bases = {v: image_basis(b) for v, b in f.blocks.items()}
    return quotient_representation(f.target, bases, name=f"coker({f.target.name})")


# --- socle, radical, top ---


def socle_bases(m: Representation) -> Dict[int, RatMatrix]:
    quiver = m.presentation.quiver
    out: Dict[int, RatMatrix] = {}
    for v in quiver.vertices:
        outgoing = [m.action[a.arrow_id] for a in quiver.outgoing(v)]
        out[v] = nullspace_basis(vstack(*outgoing, cols=m.dim(v)))
    return out


def radical_bases(m: Representation) -> Dict[int, RatMatrix]:
    quiver = m.presentation.quiver
    out: Dict[int, RatMatrix] = {}
    for v in quiver.vertices:
        incoming = [m.action[a.arrow_id] for a in quiver.incoming(v)]
        out[v] = image_basis(hstack(*incoming, rows=m.dim(v)))
    return out


def socle(m: Representation) -> Tuple[Representation, Morphism]:
    return subrepresentation(m, socle_bases(m), name=f"soc({m.name})")


def radical(m: Representation) -> Tuple[Representation, Morphism]:
    return subrepresentation(m, radical_bases(m), name=f"rad({m.name})")


def top(m: Representation) -> Tuple[Representation, Morphism]:
    return quotient_representation(m, radical_bases(m), name=f"top({m.name})")


def is_semisimple(m: Representation) -> bool:
    return all(b.is_zero() for b in m.action.values())


def _profile(dims: Mapping[int, int]) -> Tuple[Tuple[int, int], ...]:
    return tuple(sorted((v, d) for v, d in dims.items() if d))


def radical_series(m: Representation) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """Dimension vectors of the radical layers rad^k / rad^(k+1)."""
    layers = []
    current = m
    while not current.is_zero():
        rad, _ = radical(current)
        layers.append(_profile({v: current.dim(v) - rad.dim(v) for v in current.dims}))
        current = rad
    return tuple(layers)


def socle_series(m: Representation) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """Dimension vectors of the socle layers soc^(k+1) / soc^k."""
    layers = []
    current = m
    while not current.is_zero():
        bases = socle_bases(current)
        layers.append(_profile({v: b.cols for v, b in bases.items()}))
        current = quotient_representation(current, bases)[0]
    return tuple(layers)


# --- projectives and injectives ---


def projective(pres: AlgebraPresentation, v: int) -> Representation:
    """Paths starting at ``v``, each placed at its target; arrows act by extending the path."""
    pres.quiver.require_vertex(v)
    return _presentation_cache(pres, ("P", v), lambda: _build_projective(pres, v))


def _build_projective(pres: AlgebraPresentation, v: int) -> Representation:
    alg = pres.algebra
    quiver = pres.quiver
    paths = alg.from_source(v)
    position: Dict[Path, int] = {}
    dims: Dict[int, int] = {w: 0 for w in quiver.vertices}
    for p in paths:
        position[p] = dims[p.target]
        dims[p.target] += 1
    action: Dict[int, RatMatrix] = {}
    for arrow in quiver.arrows:
        rows, cols = dims[arrow.target], dims[arrow.source]
        if not rows or not cols:
            continue
        entries = [Fraction(0)] * (rows * cols)
        step = Path(arrow.source, arrow.target, (arrow.arrow_id,))
        for p in paths:
            if p.target != arrow.source:
                continue
            for q, coefficient in alg.reduce(p.then(step)).items():
                entries[position[q] * cols + position[p]] += coefficient
        action[arrow.arrow_id] = RatMatrix(rows, cols, tuple(entries))
    return Representation(pres, dims, action, name=f"P({v})")


def injective(pres: AlgebraPresentation, v: int) -> Representation:
    pres.quiver.require_vertex(v)
    return _presentation_cache(
        pres, ("I", v), lambda: vector_dual(projective(pres.opposite(), v)).relabel(f"I({v})")
    )


def projective_cover(m: Representation) -> Tuple[Representation, Morphism]:
    pres = m.presentation
    if m.is_zero():
        p = zero(pres)
        return p, zero_morphism(p, m)
    rad = radical_bases(m)
    top_data = quotient_data(m, rad)
    summands: List[Representation] = []
    generators: List[Tuple[int, Tuple[Fraction, ...]]] = []
    for v in pres.quiver.vertices:
        lift = top_data.lifts[v]
        if not lift.cols:
            continue
        if v not in pres.projective_safe:
            raise WindowExceeded(f"Projective cover of {m.name or 'module'} needs P({v}) beyond the window")
        for c in range(lift.cols):
            summands.append(projective(pres, v))
            generators.append((v, lift.column(c)))
    total = direct_sum_maps(*summands, name=" + ".join(s.name for s in summands)).total
    alg = pres.algebra
    blocks: Dict[int, RatMatrix] = {}
    for s in pres.quiver.vertices:
        columns: List[Tuple[Fraction, ...]] = []
        for v, x in generators:
            x_vec = RatMatrix(len(x), 1, x)
            for p in alg.from_source(v):
                if p.target == s:
                    columns.append((m.path_matrix(p) @ x_vec).column(0))
        blocks[s] = RatMatrix.from_columns(columns, rows=m.dim(s))
    cover = Morphism(total, m, blocks)
    if not cover.is_surjective():
        raise RuntimeError("Projective cover map is not surjective")
    ker_bases = {v: nullspace_basis(b) for v, b in cover.blocks.items()}
    rad_p = radical_bases(total)
    if not all(column_space_contains(rad_p[v], ker_bases[v]) for v in pres.quiver.vertices):
        raise RuntimeError("Projective cover is not minimal")
    return total, cover


def injective_envelope(m: Representation) -> Tuple[Representation, Morphism]:
    dual_cover, cover = projective_cover(vector_dual(m))
    envelope = vector_dual(dual_cover).relabel(dual_cover.name.replace("P(", "I("))
    inclusion = Morphism(m, envelope, {v: b.transpose() for v, b in cover.blocks.items()}, check=False)
    soc = socle_bases(envelope)
    if not all(
        column_space_contains(image_basis(inclusion.blocks[v]), soc[v]) for v in m.presentation.quiver.vertices
    ):
        raise RuntimeError("Injective envelope is not essential")
    return envelope, inclusion


def syzygy(m: Representation) -> Representation:
    _, cover = projective_cover(m)
    rep, _ = kernel(cover)
    return rep.relabel(f"O({m.name})")


def cosyzygy(m: Representation) -> Representation:
    _, inclusion = injective_envelope(m)
    rep, _ = cokernel(inclusion)
    return rep.relabel(f"O^-1({m.name})")


def syzygy_power(m: Representation, k: int) -> Representation:
    current = m
    step = syzygy if k > 0 else cosyzygy
    for _ in range(abs(k)):
        current = step(current)
    return current


# --- duality ---


def vector_dual(m: Representation) -> Representation:
    return Representation(
        m.presentation.opposite(),
        dict(m.dims),
        {a: mat.transpose() for a, mat in m.action.items()},
        name=_dual_name(m.name),
        check=False,
    )


def _dual_name(name: str) -> str:
    if name.startswith("D(") and name.endswith(")"):
        return name[2:-1]
    return f"D({name})"


def vector_dual_morphism(f: Morphism, source: Representation = None, target: Representation = None) -> Morphism:
    """D(f): D(target) -> D(source)."""
    return Morphism(
        source if source is not None else vector_dual(f.target),
        target if target is not None else vector_dual(f.source),
        {v: b.transpose() for v, b in f.blocks.items()},
        check=False,
    )


# --- star, Nakayama, transpose ---


def _injective_arrow_map(pres: AlgebraPresentation, arrow_id: int) -> Morphism:
    """The map I(w) -> I(u) induced by an arrow u -> w."""

    def build() -> Morphism:
        arrow = pres.quiver.arrow(arrow_id)
        u, w = arrow.source, arrow.target
        opp = pres.opposite()
        alg = opp.algebra
        p_u, p_w = projective(opp, u), projective(opp, w)
        position_w = _positions(alg.from_source(w))
        position_u = _positions(alg.from_source(u))
        start = Path(w, u, (arrow_id,))
        blocks: Dict[int, RatMatrix] = {}
        for t in opp.quiver.vertices:
            rows, cols = p_w.dim(t), p_u.dim(t)
            entries = [Fraction(0)] * (rows * cols)
            for p in alg.from_source(u):
                if p.target != t:
                    continue
                for q, coefficient in alg.reduce(start.then(p)).items():
                    entries[position_w[q] * cols + position_u[p]] += coefficient
            blocks[t] = RatMatrix(rows, cols, tuple(entries))
        # blocks describe P'(u) -> P'(w) over the opposite; dualize to I(w) -> I(u)
        return Morphism(
            injective(pres, w),
            injective(pres, u),
            {t: b.transpose() for t, b in blocks.items()},
        )

    return _presentation_cache(pres, ("phi", arrow_id), build)


def _positions(paths) -> Dict[Path, int]:
    counters: Dict[int, int] = {}
    out: Dict[Path, int] = {}
    for p in paths:
        out[p] = counters.get(p.target, 0)
        counters[p.target] = out[p] + 1
    return out


@dataclass(frozen=True, eq=False)
class StarImage:
    rep: Representation
    spaces: Mapping[int, HomSpace]


def star_image(m: Representation) -> StarImage:
    pres = m.presentation
    spaces: Dict[int, HomSpace] = {}
    for v in pres.quiver.vertices:
        if v not in pres.injective_safe:
            continue
        space = HomSpace(injective(pres, v), m)
        if space.dim:
            spaces[v] = space
    if sum(s.dim for s in spaces.values()) != m.total_dim:
        raise WindowExceeded(f"star({m.name or 'module'}) needs injectives beyond the window")
    action: Dict[int, RatMatrix] = {}
    for arrow in pres.quiver.arrows:
        u, w = arrow.source, arrow.target
        if u not in spaces or w not in spaces:
            continue
        phi = _injective_arrow_map(pres, arrow.arrow_id)
        columns = [spaces[w].coordinates(phi.then(g)) for g in spaces[u].basis]
        precompose = RatMatrix.from_columns(columns, rows=spaces[w].dim)
        action[arrow.arrow_id] = precompose.transpose()
    rep = Representation(
        pres.opposite(),
        {v: s.dim for v, s in spaces.items()},
        action,
        name=f"{m.name}*",
    )
    return StarImage(rep, spaces)


def star(m: Representation) -> Representation:
    return star_image(m).rep


def star_morphism(f: Morphism) -> Morphism:
    """star(f): star(target) -> star(source)."""
    src, dst = star_image(f.source), star_image(f.target)
    blocks: Dict[int, RatMatrix] = {}
    for v, space in src.spaces.items():
        if v not in dst.spaces:
            continue
        columns = [dst.spaces[v].coordinates(g.then(f)) for g in space.basis]
        blocks[v] = RatMatrix.from_columns(columns, rows=dst.spaces[v].dim).transpose()
    return Morphism(dst.rep, src.rep, blocks)


def nakayama(m: Representation) -> Representation:
    return vector_dual(star(m)).relabel(f"nu({m.name})")


def transpose(m: Representation) -> Representation:
    """Kernel of star applied to the minimal injective copresentation m -> I0 -> I1."""
    _, into_first = injective_envelope(m)
    cosyz, onto = cokernel(into_first)
    _, into_second = injective_envelope(cosyz)
    connecting = onto.then(into_second)
    rep, _ = kernel(star_morphism(connecting))
    return rep.relabel(f"Tr({m.name})")


def dtr(m: Representation) -> Representation:
    return vector_dual(transpose(m)).relabel(f"DTr({m.name})")


def star_sequence(seq: ShortExactSeq) -> Tuple[Morphism, Morphism]:
    """star(surj) and star(inj), in that order."""
    return star_morphism(seq.surj), star_morphism(seq.inj)


def is_exact_pair(first: Morphism, second: Morphism) -> bool:
    """Whether 0 -> A -first-> B -second-> C -> 0 is exact."""
    if not first.is_injective() or not second.is_surjective():
        return False
    if not first.then(second).is_zero():
        return False
    for v in first.presentation.quiver.vertices:
        if first.target.dim(v) != first.source.dim(v) + second.target.dim(v):
            return False
    return True


def check_star_exact(seq: ShortExactSeq) -> bool:
    after_surj, after_inj = star_sequence(seq)
    if after_surj.target is not after_inj.source and not after_surj.target.same_data(after_inj.source):
        return False
    after_inj = after_inj.retarget(after_surj.target, after_inj.target)
    return is_exact_pair(after_surj, after_inj)
