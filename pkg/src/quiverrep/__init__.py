from src.quiverrep.functors import (
    cokernel,
    cosyzygy,
    dtr,
    image,
    injective,
    injective_envelope,
    kernel,
    nakayama,
    projective,
    projective_cover,
    radical,
    socle,
    star,
    star_morphism,
    syzygy,
    syzygy_power,
    top,
    transpose,
    vector_dual,
)
from src.quiverrep.homs import HomSpace, hom_basis
from src.quiverrep.oracle import fitting_decompose, is_isomorphic, is_split, realize_ses
from src.quiverrep.presentation import AlgebraPresentation, Arrow, Path, Quiver, Relation, path_basis
from src.quiverrep.representation import (
    Morphism,
    Representation,
    ShortExactSeq,
    direct_sum,
    identity,
    simple,
    zero,
)
