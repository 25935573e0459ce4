"""
JSON-ready dictionaries for the quiverrep types.

Integers and rationals are written as strings so that no precision is lost in
transit; matrices are row-major lists of rows.
"""

import json
from fractions import Fraction
from typing import Any, Dict, List, Optional

from src.errors import ContractViolation
from src.exactlin import RatMatrix
from src.quiverrep.presentation import AlgebraPresentation, Arrow, Quiver, Relation
from src.quiverrep.representation import Morphism, Representation, ShortExactSeq


def _num(value) -> str:
    return str(value)


def matrix_to_rows(m: RatMatrix) -> List[List[str]]:
    return [[_num(x) for x in m.row(r)] for r in range(m.rows)]


def matrix_from_rows(rows: List[List[str]], shape: List[str]) -> RatMatrix:
    r, c = int(shape[0]), int(shape[1])
    return RatMatrix.from_rows([[Fraction(x) for x in row] for row in rows], cols=c) if r else RatMatrix.zeros(0, c)


def _matrix_dict(m: RatMatrix) -> Dict[str, Any]:
    return {"shape": [_num(m.rows), _num(m.cols)], "rows": matrix_to_rows(m)}


def quiver_to_dict(q: Quiver) -> Dict[str, Any]:
    return {
        "vertices": [_num(v) for v in q.vertices],
        "arrows": [
            {"arrow_id": _num(a.arrow_id), "source": _num(a.source), "target": _num(a.target), "label": a.label}
            for a in q.arrows
        ],
    }


def quiver_from_dict(data: Dict[str, Any]) -> Quiver:
    return Quiver(
        vertices=tuple(int(v) for v in data["vertices"]),
        arrows=tuple(
            Arrow(int(a["arrow_id"]), int(a["source"]), int(a["target"]), a["label"]) for a in data["arrows"]
        ),
    )


def presentation_to_dict(pres: AlgebraPresentation) -> Dict[str, Any]:
    return {
        "name": pres.name,
        "quiver": quiver_to_dict(pres.quiver),
        "relations": [
            {"terms": [{"coefficient": _num(c), "path": [_num(a) for a in p]} for c, p in r.terms]}
            for r in pres.relations
        ],
        "nilpotency_bound": _num(pres.nilpotency_bound),
        "projective_safe": sorted((_num(v) for v in pres.projective_safe), key=int),
        "injective_safe": sorted((_num(v) for v in pres.injective_safe), key=int),
    }


def presentation_from_dict(data: Dict[str, Any]) -> AlgebraPresentation:
    return AlgebraPresentation(
        quiver=quiver_from_dict(data["quiver"]),
        relations=tuple(
            Relation(tuple((Fraction(t["coefficient"]), tuple(int(a) for a in t["path"])) for t in r["terms"]))
            for r in data["relations"]
        ),
        nilpotency_bound=int(data["nilpotency_bound"]),
        projective_safe=frozenset(int(v) for v in data["projective_safe"]),
        injective_safe=frozenset(int(v) for v in data["injective_safe"]),
        name=data.get("name", ""),
    )


def representation_to_dict(m: Representation) -> Dict[str, Any]:
    return {
        "presentation": m.presentation.name,
        "name": m.name,
        "dim": {_num(v): _num(d) for v, d in m.dims.items() if d},
        "action": {
            _num(a): _matrix_dict(mat) for a, mat in m.action.items() if mat.rows and mat.cols
        },
    }


def representation_from_dict(data: Dict[str, Any], pres: AlgebraPresentation) -> Representation:
    if data.get("presentation", pres.name) != pres.name:
        raise ContractViolation(f"Representation belongs to {data['presentation']!r}, not {pres.name!r}")
    action = {int(a): matrix_from_rows(m["rows"], m["shape"]) for a, m in data["action"].items()}
    return Representation(pres, {int(v): int(d) for v, d in data["dim"].items()}, action, name=data.get("name", ""))


def morphism_to_dict(f: Morphism) -> Dict[str, Any]:
    return {
        "source": representation_to_dict(f.source),
        "target": representation_to_dict(f.target),
        "blocks": {_num(v): _matrix_dict(b) for v, b in f.blocks.items() if b.rows and b.cols},
    }


def _blocks_from_dict(data: Dict[str, Any]) -> Dict[int, RatMatrix]:
    return {int(v): matrix_from_rows(b["rows"], b["shape"]) for v, b in data.items()}


def morphism_from_dict(
    data: Dict[str, Any],
    pres: AlgebraPresentation,
    source: Optional[Representation] = None,
    target: Optional[Representation] = None,
) -> Morphism:
    """Rebuild a morphism; intertwining is checked again on the way in."""
    source = source if source is not None else representation_from_dict(data["source"], pres)
    target = target if target is not None else representation_from_dict(data["target"], pres)
    return Morphism(source, target, _blocks_from_dict(data["blocks"]))


def short_exact_seq_to_dict(seq: ShortExactSeq) -> Dict[str, Any]:
    return {
        "left": representation_to_dict(seq.left),
        "middle": representation_to_dict(seq.middle),
        "right": representation_to_dict(seq.right),
        "inj": morphism_to_dict(seq.inj)["blocks"],
        "surj": morphism_to_dict(seq.surj)["blocks"],
        "non_split": seq.non_split,
    }


def short_exact_seq_from_dict(data: Dict[str, Any], pres: AlgebraPresentation) -> ShortExactSeq:
    left = representation_from_dict(data["left"], pres)
    middle = representation_from_dict(data["middle"], pres)
    right = representation_from_dict(data["right"], pres)
    return ShortExactSeq(
        left,
        middle,
        right,
        Morphism(left, middle, _blocks_from_dict(data["inj"])),
        Morphism(middle, right, _blocks_from_dict(data["surj"])),
        non_split=data.get("non_split"),
    )


def dumps(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
