import pytest

from src.errors import ContractViolation, RelationViolation
from src.exactlin import RatMatrix
from src.families.qsl2 import StringObject
from src.families.serial import Interval, Side
from src.quiverrep import functors
from src.quiverrep.homs import HomSpace, hom_basis
from src.quiverrep.oracle import is_isomorphic
from src.quiverrep.representation import Representation, direct_sum, identity, simple, zero, zero_morphism


def V(i, j):
    return Interval(Side.V, i, j)


def U(i, j):
    return Interval(Side.U, i, j)


# --- representations ---


def test_representation_checks_arrow_shapes(serial1):
    pres = serial1.presentation()
    with pytest.raises(ContractViolation):
        Representation(pres, {0: 1, 1: 1}, {5: RatMatrix.identity(2)})


def test_representation_checks_relations(serial1):
    pres = serial1.presentation()
    one = RatMatrix.identity(1)
    # with n = 1 every path of length two vanishes
    with pytest.raises(RelationViolation):
        Representation(pres, {0: 1, 1: 1, 2: 1}, {5: one, 6: one})


def test_direct_sum_adds_dimension_vectors(serial4):
    total = direct_sum(serial4.realize(V(0, 2)), serial4.realize(V(1, 1)))
    assert total.dim_vector() == {0: 1, 1: 2, 2: 1}


# --- homs ---


def test_hom_dimensions_between_intervals(serial4):
    pres = serial4.presentation()
    m = serial4.realize(V(0, 2))
    assert len(hom_basis(functors.projective(pres, 0), m)) == 1
    assert len(hom_basis(simple(pres, 0), m)) == 0
    assert len(hom_basis(simple(pres, 2), m)) == 1
    space = HomSpace(m, m)
    assert space.dim == 1
    assert space.coordinates(identity(m)) == (1,)


# --- socle, radical, projectives ---


def test_top_and_socle_of_an_interval(serial4):
    m = serial4.realize(V(0, 2))
    assert functors.top(m)[0].dim_vector() == {0: 1}
    assert functors.socle(m)[0].dim_vector() == {2: 1}
    assert functors.radical(m)[0].dim_vector() == {1: 1, 2: 1}
    assert len(functors.radical_series(m)) == 3


def test_serial_projectives_and_injectives(serial4):
    pres = serial4.presentation()
    assert functors.projective(pres, 0).dim_vector() == {v: 1 for v in range(0, 5)}
    assert functors.injective(pres, 0).dim_vector() == {v: 1 for v in range(-4, 1)}
    assert serial4.identify(functors.injective(pres, 0)) == V(-4, 0)
    assert len(functors.radical_series(functors.projective(pres, 0))) == 5


def test_serial_syzygies(serial4):
    simple_zero = serial4.realize(V(0, 0))
    assert serial4.identify(functors.syzygy(simple_zero)) == V(1, 4)
    m = serial4.realize(V(0, 2))
    assert serial4.identify(functors.syzygy(m)) == V(3, 4)
    assert serial4.identify(functors.cosyzygy(m)) == V(-2, -1)
    assert serial4.identify(functors.syzygy_power(m, -2)) == V(-5, -3)


def test_serial_dualities(serial4):
    m = serial4.realize(V(0, 2))
    assert serial4.identify(functors.vector_dual(m)) == U(0, 2)
    assert serial4.identify(functors.star(m)) == U(4, 6)
    assert serial4.identify(functors.nakayama(m)) == V(4, 6)
    assert serial4.identify(functors.transpose(m)) == U(-1, 1)
    assert serial4.identify(functors.dtr(m)) == V(-1, 1)


def test_projective_cover_is_minimal(serial4):
    m = direct_sum(serial4.realize(V(0, 2)), serial4.realize(V(3, 3)))
    cover, onto = functors.projective_cover(m)
    assert onto.is_surjective()
    assert cover.total_dim == 10


def test_block_projectives_are_the_injectives(block):
    pres = block.presentation()
    assert functors.projective(pres, 0).dim_vector() == {0: 2, 1: 1}
    assert functors.projective(pres, 3).dim_vector() == {2: 1, 3: 2, 4: 1}
    assert functors.injective(pres, 3).dim_vector() == {2: 1, 3: 2, 4: 1}


def test_block_syzygy_of_a_simple(block):
    rep = functors.syzygy(simple(block.presentation(), 2))
    assert rep.dim_vector() == {1: 1, 2: 1, 3: 1}
    assert block.identify(rep) == StringObject(1, 2)


# --- functor edge cases ---


def _objects(serial4, block):
    return [
        serial4.realize(V(0, 2)),
        serial4.realize(U(1, 3)),
        direct_sum(serial4.realize(V(0, 0)), serial4.realize(V(-1, 1))),
        block.realize(StringObject(1, 2)),
        block.realize(StringObject(-2, 1)),
        block.injective(2),
    ]


@pytest.mark.parametrize("index", range(6))
def test_double_vector_dual_is_isomorphic(serial4, block, index):
    m = _objects(serial4, block)[index]
    twice = functors.vector_dual(functors.vector_dual(m))
    assert twice.presentation is m.presentation
    assert is_isomorphic(twice, m)


@pytest.mark.parametrize("index", range(6))
def test_kernel_and_cokernel_of_identity_vanish(serial4, block, index):
    m = _objects(serial4, block)[index]
    assert functors.kernel(identity(m))[0].is_zero()
    assert functors.cokernel(identity(m))[0].is_zero()


@pytest.mark.parametrize("index", range(6))
def test_kernel_and_cokernel_of_zero_map(serial4, block, index):
    objects = _objects(serial4, block)
    m = objects[index]
    n = objects[index - 1] if objects[index - 1].presentation is m.presentation else m
    f = zero_morphism(m, n)
    assert is_isomorphic(functors.kernel(f)[0], m)
    assert is_isomorphic(functors.cokernel(f)[0], n)


@pytest.mark.parametrize(
    "interval, expected",
    [(V(0, 2), V(-2, -1)), (V(1, 1), V(-3, 0)), (V(-1, 2), V(-2, -2)), (V(0, 3), V(-1, -1))],
)
def test_cokernel_of_the_envelope_is_the_shifted_interval(serial4, interval, expected):
    m = serial4.realize(interval)
    envelope, inclusion = functors.injective_envelope(m)
    assert serial4.identify(envelope) == V(interval.j - 4, interval.j)
    quotient = functors.cokernel(inclusion)[0]
    assert quotient.dim_vector() == serial4.realize(expected).dim_vector()
    assert is_isomorphic(quotient, serial4.realize(expected))


def test_transpose_of_an_injective_is_zero(serial4, block):
    assert functors.transpose(serial4.realize(V(-4, 0))).is_zero()
    assert functors.transpose(block.injective(2)).is_zero()
    assert functors.dtr(serial4.realize(V(-2, 2))).is_zero()


def test_nakayama_of_zero_is_zero(serial4, block):
    for pres in (serial4.presentation(), block.presentation()):
        assert functors.nakayama(zero(pres)).is_zero()
        assert functors.star(zero(pres)).is_zero()
