# Metric spaces, nearest-point queries and eps-net ball decomposition
from robustkz.metric.nets import ball_decompose, greedy_net
from robustkz.metric.space import Ball, LqSpace, MatrixSpace, MetricSpace, distance, nearest

__all__ = [
    "Ball",
    "LqSpace",
    "MatrixSpace",
    "MetricSpace",
    "ball_decompose",
    "distance",
    "greedy_net",
    "nearest",
]
