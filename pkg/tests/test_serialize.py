import json

import pytest

from src.errors import ContractViolation, RelationViolation
from src.families.serial import Interval, SerialFamily, Side
from src.quiverrep import serialize
from src.quiverrep.oracle import is_split, realize_ses
from src.quiverrep.representation import identity


def test_representation_dict_uses_strings(serial1):
    rep = serial1.realize(Interval(Side.V, 0, 1))
    data = serialize.representation_to_dict(rep)
    assert data["presentation"] == serial1.family_name
    assert data["name"] == "I(1)"
    assert data["dim"] == {"0": "1", "1": "1"}
    # arrow 0 -> 1 has id 0 - lo
    assert data["action"] == {"5": {"shape": ["1", "1"], "rows": [["1"]]}}


def test_representation_survives_json(serial4):
    rep = serial4.realize(Interval(Side.U, 2, 5))
    pres = serial4.presentation_for(Side.U)
    data = json.loads(serialize.dumps(serialize.representation_to_dict(rep)))
    back = serialize.representation_from_dict(data, pres)
    assert back.same_data(rep)


def test_representation_from_other_presentation_is_rejected(serial1):
    data = serialize.representation_to_dict(serial1.realize(Interval(Side.V, 0, 0)))
    with pytest.raises(ContractViolation):
        serialize.representation_from_dict(data, SerialFamily(2, 0, 6).presentation())


def test_presentation_survives_json():
    pres = SerialFamily(2, 0, 6).presentation()
    back = serialize.presentation_from_dict(json.loads(serialize.dumps(serialize.presentation_to_dict(pres))))
    assert back.quiver == pres.quiver
    assert back.relations == pres.relations
    assert back.projective_safe == pres.projective_safe
    assert back.algebra.dimension == pres.algebra.dimension


def test_short_exact_seq_dict_records_the_flag(serial1):
    seq = realize_ses(
        serial1.realize(Interval(Side.V, 1, 1)),
        serial1.realize(Interval(Side.V, 0, 1)),
        serial1.realize(Interval(Side.V, 0, 0)),
    )
    data = serialize.short_exact_seq_to_dict(seq)
    assert data["non_split"] is True
    assert set(data["inj"]) == {"1"}
    assert set(data["surj"]) == {"0"}


def _sequence(serial1):
    return realize_ses(
        serial1.realize(Interval(Side.V, 1, 1)),
        serial1.realize(Interval(Side.V, 0, 1)),
        serial1.realize(Interval(Side.V, 0, 0)),
    )


def test_morphism_survives_json(serial1):
    f = _sequence(serial1).inj
    data = json.loads(serialize.dumps(serialize.morphism_to_dict(f)))
    back = serialize.morphism_from_dict(data, serial1.presentation())
    assert back.source.same_data(f.source)
    assert back.target.same_data(f.target)
    assert dict(back.blocks) == dict(f.blocks)


def test_morphism_from_dict_checks_intertwining(serial1):
    m = serial1.realize(Interval(Side.V, 0, 1))
    data = serialize.morphism_to_dict(identity(m))
    data["blocks"]["1"]["rows"] = [["0"]]
    with pytest.raises(RelationViolation):
        serialize.morphism_from_dict(data, serial1.presentation())


def test_short_exact_seq_survives_json(serial1):
    seq = _sequence(serial1)
    data = json.loads(serialize.dumps(serialize.short_exact_seq_to_dict(seq)))
    back = serialize.short_exact_seq_from_dict(data, serial1.presentation())
    assert back.non_split is True
    assert back.middle.same_data(seq.middle)
    assert dict(back.inj.blocks) == dict(seq.inj.blocks)
    assert dict(back.surj.blocks) == dict(seq.surj.blocks)
    assert not is_split(back)
