"""
Exact dense linear algebra over the rationals.

Every basis-producing routine is derived from the reduced row-echelon form so
that repeated runs give bit-identical answers.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from src.errors import ContractViolation

RatScalar = Fraction
ScalarLike = Union[int, str, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_scalar(value: ScalarLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise ContractViolation(f"Refusing inexact scalar {value!r}")
    return Fraction(value)


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ContractViolation(f"Negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ContractViolation(
                f"Expected {self.rows * self.cols} entries for {self.rows}x{self.cols}, got {len(self.entries)}"
            )
        if not all(isinstance(x, Fraction) for x in self.entries):
            object.__setattr__(self, "entries", tuple(to_scalar(x) for x in self.entries))

    # --- constructors ---

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, size: int) -> "RatMatrix":
        entries = [ZERO] * (size * size)
        for k in range(size):
            entries[k * size + k] = ONE
        return cls(size, size, tuple(entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[ScalarLike]], cols: Optional[int] = None) -> "RatMatrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        flat: List[Fraction] = []
        for row in rows:
            if len(row) != cols:
                raise ContractViolation("Ragged rows")
            flat.extend(to_scalar(x) for x in row)
        return cls(len(rows), cols, tuple(flat))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[ScalarLike]], rows: int) -> "RatMatrix":
        return cls.from_rows([list(col) for col in columns], cols=rows).transpose()

    # --- accessors ---

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        r, c = index
        return self.entries[r * self.cols + c]

    def row(self, r: int) -> Tuple[Fraction, ...]:
        return self.entries[r * self.cols:(r + 1) * self.cols]

    def column(self, c: int) -> Tuple[Fraction, ...]:
        return tuple(self.entries[r * self.cols + c] for r in range(self.rows))

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(r)) for r in range(self.rows)]

    def columns(self) -> List[Tuple[Fraction, ...]]:
        return [self.column(c) for c in range(self.cols)]

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # --- arithmetic ---

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            self.cols,
            self.rows,
            tuple(self.entries[r * self.cols + c] for c in range(self.cols) for r in range(self.rows)),
        )

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ContractViolation(f"Cannot multiply {self.shape} by {other.shape}")
        out: List[Fraction] = []
        other_cols = other.columns()
        for r in range(self.rows):
            row = self.row(r)
            for col in other_cols:
                acc = ZERO
                for x, y in zip(row, col):
                    if x and y:
                        acc += x * y
                out.append(acc)
        return RatMatrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ContractViolation(f"Cannot add {self.shape} and {other.shape}")
        return RatMatrix(self.rows, self.cols, tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + (-other)

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def scale(self, factor: ScalarLike) -> "RatMatrix":
        k = to_scalar(factor)
        return RatMatrix(self.rows, self.cols, tuple(k * x for x in self.entries))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix(
            len(row_idx),
            len(col_idx),
            tuple(self.entries[r * self.cols + c] for r in row_idx for c in col_idx),
        )

    def select_columns(self, col_idx: Sequence[int]) -> "RatMatrix":
        return self.submatrix(range(self.rows), col_idx)

    def select_rows(self, row_idx: Sequence[int]) -> "RatMatrix":
        return self.submatrix(row_idx, range(self.cols))

    def flatten(self) -> Tuple[Fraction, ...]:
        return self.entries


def hstack(*blocks: RatMatrix, rows: Optional[int] = None) -> RatMatrix:
    if not blocks:
        return RatMatrix.zeros(rows or 0, 0)
    height = blocks[0].rows
    if any(b.rows != height for b in blocks):
        raise ContractViolation("hstack of blocks with different heights")
    cols = sum(b.cols for b in blocks)
    flat: List[Fraction] = []
    for r in range(height):
        for b in blocks:
            flat.extend(b.row(r))
    return RatMatrix(height, cols, tuple(flat))


def vstack(*blocks: RatMatrix, cols: Optional[int] = None) -> RatMatrix:
    if not blocks:
        return RatMatrix.zeros(0, cols or 0)
    width = blocks[0].cols
    if any(b.cols != width for b in blocks):
        raise ContractViolation("vstack of blocks with different widths")
    flat: List[Fraction] = []
    for b in blocks:
        flat.extend(b.entries)
    return RatMatrix(sum(b.rows for b in blocks), width, tuple(flat))


def block_diag(*blocks: RatMatrix) -> RatMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    flat = [ZERO] * (rows * cols)
    r0 = c0 = 0
    for b in blocks:
        for r in range(b.rows):
            for c in range(b.cols):
                flat[(r0 + r) * cols + c0 + c] = b[r, c]
        r0 += b.rows
        c0 += b.cols
    return RatMatrix(rows, cols, tuple(flat))


class RrefResult(NamedTuple):
    reduced: RatMatrix
    pivot_cols: Tuple[int, ...]
    rank: int


def _rref_rows(rows: List[List[Fraction]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    pivots: List[int] = []
    nrows = len(rows)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        if lead != 1:
            rows[r] = [x / lead for x in rows[r]]
        pivot_row = rows[r]
        for i in range(nrows):
            if i == r:
                continue
            factor = rows[i][c]
            if factor:
                rows[i] = [x - factor * y if y else x for x, y in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m: RatMatrix) -> RrefResult:
    rows, pivots = _rref_rows(m.to_rows(), m.cols)
    return RrefResult(RatMatrix.from_rows(rows, cols=m.cols), tuple(pivots), len(pivots))


def rank(m: RatMatrix) -> int:
    return len(_rref_rows(m.to_rows(), m.cols)[1])


def nullspace_basis(m: RatMatrix) -> RatMatrix:
    rows, pivots = _rref_rows(m.to_rows(), m.cols)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    columns: List[List[Fraction]] = []
    for f in free:
        vec = [ZERO] * m.cols
        vec[f] = ONE
        for row_index, p in enumerate(pivots):
            vec[p] = -rows[row_index][f]
        columns.append(vec)
    return RatMatrix.from_columns(columns, rows=m.cols)


def image_basis(m: RatMatrix) -> RatMatrix:
    _, pivots = _rref_rows(m.to_rows(), m.cols)
    return m.select_columns(pivots)


def solve(a: RatMatrix, b: RatMatrix) -> Optional[RatMatrix]:
    """Particular solution of a·x = b with free variables at zero, or None."""
    if a.rows != b.rows:
        raise ContractViolation(f"solve: {a.rows} equations but right-hand side has {b.rows} rows")
    rows, pivots = _rref_rows(hstack(a, b).to_rows() if a.rows else [], a.cols + b.cols)
    if any(p >= a.cols for p in pivots):
        return None
    x = [[ZERO] * b.cols for _ in range(a.cols)]
    for row_index, p in enumerate(pivots):
        x[p] = list(rows[row_index][a.cols:])
    return RatMatrix.from_rows(x, cols=b.cols)


def inverse(m: RatMatrix) -> Optional[RatMatrix]:
    if not m.is_square():
        return None
    if rank(m) != m.rows:
        return None
    return solve(m, RatMatrix.identity(m.rows))


def is_invertible(m: RatMatrix) -> bool:
    return m.is_square() and rank(m) == m.rows


def complement_columns(basis: RatMatrix) -> Tuple[int, ...]:
    """Indices of standard basis vectors that complete ``basis`` to the whole space."""
    ambient = basis.rows
    _, pivots = _rref_rows(hstack(basis, RatMatrix.identity(ambient)).to_rows(), basis.cols + ambient)
    return tuple(p - basis.cols for p in pivots if p >= basis.cols)


def column_space_contains(basis: RatMatrix, vectors: RatMatrix) -> bool:
    if vectors.cols == 0:
        return True
    return rank(hstack(basis, vectors)) == rank(basis)


@dataclass(frozen=True)
class SubspaceReport:
    sum_basis: RatMatrix
    intersection_basis: RatMatrix
    a_in_b: bool
    b_in_a: bool


def subspace_ops(basis_a: RatMatrix, basis_b: RatMatrix, ambient_dim: int) -> SubspaceReport:
    if basis_a.rows != ambient_dim or basis_b.rows != ambient_dim:
        raise ContractViolation(
            f"subspace_ops: bases live in dims {basis_a.rows}/{basis_b.rows}, ambient is {ambient_dim}"
        )
    sum_basis = image_basis(hstack(basis_a, basis_b))
    kernel = nullspace_basis(hstack(basis_a, -basis_b))
    coefficients = kernel.select_rows(range(basis_a.cols))
    intersection = image_basis(basis_a @ coefficients)
    rank_a = rank(basis_a)
    rank_b = rank(basis_b)
    return SubspaceReport(
        sum_basis=sum_basis,
        intersection_basis=intersection,
        a_in_b=sum_basis.cols == rank_b,
        b_in_a=sum_basis.cols == rank_a,
    )


def vector(values: Iterable[ScalarLike]) -> RatMatrix:
    items = [to_scalar(v) for v in values]
    return RatMatrix(len(items), 1, tuple(items))
