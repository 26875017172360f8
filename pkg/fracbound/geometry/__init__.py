from .domain import (
    Ball,
    Box,
    DomainSpec,
    indicator_omega,
    counted_measure,
    exterior_measure,
)
from .obstacle import ObstacleSpec, sample_obstacle
