"""Mirror-descent steppers and the run loop"""
from group_md.updates.factory import Stepper, StepperFactory
from group_md.updates.runner import run
from group_md.updates.steppers import centred_gradient, step_dmd, step_eg, step_geg, step_mmd

__all__ = [
    'Stepper',
    'StepperFactory',
    'centred_gradient',
    'run',
    'step_dmd',
    'step_eg',
    'step_geg',
    'step_mmd',
]
