"""
JSON instance documents.

Schema:
    {"metric": {"kind": "lq", "q": 2} | {"kind": "matrix", "d": [[...]]},
     "points": [[...], ...],
     "facilities": [[...], ...] | "same_as_points",
     "k": int, "z": int,
     "groups": [{"weights": {"<point index>": weight, ...}} | {"subset": [...]}, ...],
     "point_weights": [...]  (optional, used by subset groups)}

Under a matrix metric, points and facilities are row indices of "d".
Documents are written with sorted keys and shortest round-trip floats so a
save/load cycle is bit-exact and the digest is stable.
"""

import hashlib
import json
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, StrictInt, ValidationError, model_validator

from robustkz.config import settings
from robustkz.errors import InstanceValidationError
from robustkz.instance.model import Instance
from robustkz.metric.space import LqSpace, MatrixSpace, MetricSpace

SAME_AS_POINTS = "same_as_points"


class LqMetricDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["lq"]
    q: FiniteFloat = Field(default=2.0, ge=1.0)
    doubling_dimension: Optional[StrictInt] = Field(default=None, ge=1)


class MatrixMetricDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["matrix"]
    d: List[List[FiniteFloat]]
    doubling_dimension: Optional[StrictInt] = Field(default=None, ge=1)


MetricDoc = Annotated[Union[LqMetricDoc, MatrixMetricDoc], Field(discriminator="kind")]
PointList = Union[List[List[FiniteFloat]], List[StrictInt], List[FiniteFloat]]


class GroupDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    weights: Optional[Dict[int, FiniteFloat]] = None
    subset: Optional[List[StrictInt]] = None

    @model_validator(mode="after")
    def _one_form(self) -> "GroupDoc":
        if (self.weights is None) == (self.subset is None):
            raise ValueError("a group needs exactly one of 'weights' or 'subset'")
        return self


class InstanceDocument(BaseModel):
    """Wire form of an instance."""

    model_config = ConfigDict(extra="forbid")

    metric: MetricDoc
    points: PointList
    facilities: Union[Literal["same_as_points"], PointList]
    k: StrictInt
    z: StrictInt
    groups: List[GroupDoc]
    point_weights: Optional[List[FiniteFloat]] = None


def space_from_doc(metric: Union[LqMetricDoc, MatrixMetricDoc],
                   validation_limit: Optional[int] = None) -> MetricSpace:
    if isinstance(metric, LqMetricDoc):
        return LqSpace(q=metric.q, doubling_dimension=metric.doubling_dimension)
    limit = settings.matrix_validation_limit if validation_limit is None else validation_limit
    return MatrixSpace(metric.d, validation_limit=limit,
                       doubling_dimension=metric.doubling_dimension)


def space_to_doc(space: MetricSpace) -> Dict[str, Any]:
    doc: Dict[str, Any]
    if isinstance(space, LqSpace):
        doc = {"kind": "lq", "q": space.q}
    elif isinstance(space, MatrixSpace):
        doc = {"kind": "matrix", "d": space.matrix.tolist()}
    else:
        raise InstanceValidationError(f"unsupported metric kind {space.kind!r}")
    if space.doubling_dimension is not None:
        doc["doubling_dimension"] = space.doubling_dimension
    return doc


def _points_to_doc(space: MetricSpace, points) -> list:
    if isinstance(space, MatrixSpace):
        return [int(p) for p in points]
    return [[float(c) for c in row] for row in points]


def instance_from_document(doc: InstanceDocument, validation_limit: Optional[int] = None
                           ) -> Instance:
    """Build a validated Instance from a parsed document."""
    space = space_from_doc(doc.metric, validation_limit)
    if isinstance(space, MatrixSpace) and any(isinstance(p, (list, float)) for p in doc.points):
        raise InstanceValidationError("matrix-metric points must be integer indices")
    alias = doc.facilities == SAME_AS_POINTS
    facilities = doc.points if alias else doc.facilities
    n = len(doc.points)
    groups = []
    for group in doc.groups:
        if group.weights is not None:
            groups.append(dict(group.weights))
        else:
            pw = doc.point_weights if doc.point_weights is not None else [1.0] * n
            if len(pw) != n:
                raise InstanceValidationError("point_weights must have one entry per point")
            for p in group.subset:
                if not 0 <= p < n:
                    raise InstanceValidationError(f"subset references point {p} out of range")
            groups.append({p: float(pw[p]) for p in group.subset})
    return Instance(space, doc.points, facilities, doc.k, doc.z, groups, facilities_alias=alias,
                    aspect_warning_exponent=settings.aspect_warning_exponent)


def instance_to_dict(instance: Instance) -> Dict[str, Any]:
    """Plain-dict wire form, groups always written as weight maps."""
    space = instance.space
    return {
        "metric": space_to_doc(space),
        "points": _points_to_doc(space, instance.points),
        "facilities": (SAME_AS_POINTS if instance.facilities_alias
                       else _points_to_doc(space, instance.facilities)),
        "k": int(instance.k),
        "z": int(instance.z),
        "groups": [{"weights": {str(p): w for p, w in g.items()}} for g in instance.groups],
    }


def canonical_json(data: Any) -> str:
    """Sorted-key JSON with shortest round-trip floats and a trailing newline."""
    if isinstance(data, BaseModel):
        data = data.model_dump(mode="json", exclude_none=True)
    return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"


def instance_digest(instance: Instance) -> str:
    """SHA-256 of the canonical instance JSON."""
    return hashlib.sha256(canonical_json(instance_to_dict(instance)).encode("utf-8")).hexdigest()


def parse_instance(text: str, validation_limit: Optional[int] = None) -> Instance:
    """Parse and validate instance JSON text."""
    try:
        doc = InstanceDocument.model_validate_json(text)
    except ValidationError as e:
        raise InstanceValidationError(f"instance schema violation: {e}") from e
    return instance_from_document(doc, validation_limit)


def load_instance(path: Union[str, Path], validation_limit: Optional[int] = None) -> Instance:
    """Read an instance file."""
    return parse_instance(Path(path).read_text(encoding="utf-8"), validation_limit)


def save_instance(instance: Instance, path: Union[str, Path]) -> None:
    """Write an instance file in canonical form."""
    Path(path).write_text(canonical_json(instance_to_dict(instance)), encoding="utf-8")
