"""
Hom spaces between representations, solved as linear systems.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from src.errors import ContractViolation
from src.exactlin import RatMatrix, nullspace_basis, solve
from src.quiverrep.representation import Morphism, Representation, linear_combination, require_same_presentation

logger = logging.getLogger(__name__)


def hom_basis(m: Representation, n: Representation) -> Tuple[Morphism, ...]:
    """Basis of Hom(m, n).

    The unknowns are the entries of the blocks ``X_v`` (row-major, vertices in
    quiver order); every arrow ``a: u -> w`` contributes ``X_w M_a - N_a X_u = 0``.
    """
    pres = require_same_presentation(m, n)
    quiver = pres.quiver
    offsets: Dict[int, int] = {}
    unknowns = 0
    for v in quiver.vertices:
        if m.dim(v) and n.dim(v):
            offsets[v] = unknowns
            unknowns += n.dim(v) * m.dim(v)
    if not unknowns:
        return ()

    equations: List[List[Fraction]] = []
    for arrow in quiver.arrows:
        u, w = arrow.source, arrow.target
        rows_w, cols_u = n.dim(w), m.dim(u)
        if not rows_w or not cols_u:
            continue
        m_arrow = m.action[arrow.arrow_id]
        n_arrow = n.action[arrow.arrow_id]
        for r in range(rows_w):
            for c in range(cols_u):
                row = [Fraction(0)] * unknowns
                touched = False
                if w in offsets:
                    width = m.dim(w)
                    for k in range(width):
                        value = m_arrow[k, c]
                        if value:
                            row[offsets[w] + r * width + k] += value
                            touched = True
                if u in offsets:
                    width = m.dim(u)
                    for k in range(n.dim(u)):
                        value = n_arrow[r, k]
                        if value:
                            row[offsets[u] + k * width + c] -= value
                            touched = True
                if touched:
                    equations.append(row)

    kernel = nullspace_basis(RatMatrix.from_rows(equations, cols=unknowns))
    basis: List[Morphism] = []
    for col in range(kernel.cols):
        values = kernel.column(col)
        blocks: Dict[int, RatMatrix] = {}
        for v, start in offsets.items():
            size = n.dim(v) * m.dim(v)
            blocks[v] = RatMatrix(n.dim(v), m.dim(v), values[start:start + size])
        basis.append(Morphism(m, n, blocks, check=False))
    logger.debug("dim Hom(%s, %s) = %d", m.name or "?", n.name or "?", len(basis))
    return tuple(basis)


class HomSpace:
    """A Hom space with a fixed basis and coordinates in that basis."""

    def __init__(self, source: Representation, target: Representation) -> None:
        self.source = source
        self.target = target
        self.basis = hom_basis(source, target)
        self._matrix: Optional[RatMatrix] = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _basis_matrix(self) -> RatMatrix:
        if self._matrix is None:
            columns = [f.flatten() for f in self.basis]
            size = len(columns[0]) if columns else 0
            self._matrix = RatMatrix.from_columns(columns, rows=size)
        return self._matrix

    def coordinates(self, f: Morphism) -> Tuple[Fraction, ...]:
        if not self.basis:
            if not f.is_zero():
                raise ContractViolation("Nonzero morphism in a zero Hom space")
            return ()
        flat = f.flatten()
        x = solve(self._basis_matrix(), RatMatrix(len(flat), 1, flat))
        if x is None:
            raise ContractViolation("Morphism does not lie in this Hom space")
        return x.column(0)

    def element(self, coefficients) -> Morphism:
        return linear_combination(self.source, self.target, self.basis, coefficients)
