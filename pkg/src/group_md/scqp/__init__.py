"""Matrix-free simplex-constrained quadratic programming benchmark"""
from group_md.scqp.instance import (
    ScqpInstance,
    gradient,
    loss,
    make_instance,
    noisy_gradient,
    plant_instance,
)
from group_md.scqp.noise import NoiseModel
from group_md.scqp.operator import (
    SpectralOperator,
    apply_q,
    apply_u,
    apply_ut,
    estimate_norm,
    make_operator,
)

__all__ = [
    'NoiseModel',
    'ScqpInstance',
    'SpectralOperator',
    'apply_q',
    'apply_u',
    'apply_ut',
    'estimate_norm',
    'gradient',
    'loss',
    'make_instance',
    'make_operator',
    'noisy_gradient',
    'plant_instance',
]
