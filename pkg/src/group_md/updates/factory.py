"""
Stepper factory: binds an UpdateConfig to a concrete update rule
"""
from abc import ABC, abstractmethod
from typing import Optional

from numpy.typing import ArrayLike

from group_md.exceptions import ParamError
from group_md.links.base import LinkFunction
from group_md.links.factory import get_link
from group_md.models.simplex import SimplexVector
from group_md.models.update_config import UpdateConfig
from group_md.updates.steppers import StepResult, step_dmd, step_eg, step_geg, step_mmd


class Stepper(ABC):
    """Abstract base class for configured update rules"""

    def __init__(self, link: LinkFunction, config: UpdateConfig):
        self.link = link
        self.config = config

    @abstractmethod
    def step(self, w: SimplexVector, g: ArrayLike, eta: float) -> StepResult:
        """
        Take one update step

        Args:
            w: Current iterate
            g: Gradient (or noisy gradient) at w
            eta: Learning rate of this step

        Returns:
            (next iterate, step diagnostics)
        """
        pass


class EGStepper(Stepper):
    def step(self, w, g, eta):
        return step_eg(w, g, eta, centred=self.config.use_centred)


class GEGStepper(Stepper):
    def step(self, w, g, eta):
        return step_geg(w, g, eta, self.link, centred=self.config.use_centred)


class DMDStepper(Stepper):
    def step(self, w, g, eta):
        return step_dmd(w, g, eta, self.link, centred=self.config.use_centred,
                        guard=self.config.guard)


class MMDStepper(Stepper):
    which = 'geg_link'

    def step(self, w, g, eta):
        return step_mmd(w, g, eta, self.link, which=self.which,
                        centred=self.config.use_centred)


class DualMMDStepper(MMDStepper):
    which = 'dmd_link'


class StepperFactory:
    """Factory for creating steppers"""

    _steppers = {
        'eg': EGStepper,
        'geg': GEGStepper,
        'dmd': DMDStepper,
        'mmd-geg': MMDStepper,
        'mmd-dmd': DualMMDStepper,
    }

    @classmethod
    def create_stepper(cls, config: UpdateConfig, link: Optional[LinkFunction] = None) -> Stepper:
        """
        Create a stepper for a configuration

        Args:
            config: Update configuration
            link: Prebuilt link; parsed from config.link when omitted

        Returns:
            Stepper instance
        """
        key = config.algorithm.lower().replace('_', '-')
        if key not in cls._steppers:
            raise ParamError(
                f"Unsupported algorithm: {config.algorithm}. "
                f"Supported algorithms: {', '.join(cls._steppers.keys())}"
            )
        stepper_class = cls._steppers[key]
        return stepper_class(link or get_link(config.link), config)

    @classmethod
    def register_stepper(cls, algorithm: str, stepper_class: type) -> None:
        """Register a new update rule under an algorithm key"""
        cls._steppers[algorithm.lower()] = stepper_class

    @classmethod
    def get_supported_algorithms(cls) -> list:
        """Get list of supported algorithm keys"""
        return list(cls._steppers.keys())
