"""
Coreset JSON: the reduced instance in the usual instance schema plus the
representative map and the construction parameters.
"""

from dataclasses import asdict
from typing import Any, Dict

from robustkz.coreset.builder import Coreset, coreset_instance
from robustkz.instance.io import instance_to_dict
from robustkz.instance.model import Instance


def coreset_to_dict(coreset: Coreset, original: Instance) -> Dict[str, Any]:
    """
    Serializable form of a coreset.

    "rep" maps every positively weighted original point to the index of its
    representative among the coreset instance's points; "source_points" lists
    the original index of each coreset point.
    """
    doc = instance_to_dict(coreset_instance(coreset, original))
    position = {p: i for i, p in enumerate(coreset.points)}
    params = asdict(coreset.params)
    params["bicriteria_centers"] = list(coreset.params.bicriteria_centers)
    doc.update({
        "rep": {str(p): position[r] for p, r in sorted(coreset.rep.items())},
        "source_points": list(coreset.points),
        "params": params,
        "size": coreset.size_report(),
    })
    return doc
