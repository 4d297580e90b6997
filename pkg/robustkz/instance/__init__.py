# Instance data model, cost evaluation and JSON documents
from robustkz.instance.io import instance_digest, load_instance, save_instance
from robustkz.instance.model import Instance, Solution, group_cost, solution_cost

__all__ = [
    "Instance",
    "Solution",
    "group_cost",
    "instance_digest",
    "load_instance",
    "save_instance",
    "solution_cost",
]
