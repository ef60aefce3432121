"""Numeric settings shared by the zero tester and the simulator."""

from dataclasses import asdict, dataclass, fields, replace
from typing import Tuple

DEFAULT_SEED = 20070520


@dataclass(frozen=True)
class ProbeSettings:
    """Settings of the semi-decision procedure behind `expr.is_zero`.

    Args:
        seed (int): seed of the probe point generator.
        probes (int): number of admissible probe points.
        tolerance (float): absolute tolerance of a numeric zero verdict.
        pole_delta (float): probe points closer than this to a pole or a
            log zero are rejected and re-drawn.
        real_box (tuple): interval the real parts of probes are drawn from.
        imag_box (tuple): interval the imaginary parts are drawn from.
        symbolic_ops_limit (int): the rewrite-based symbolic proof is
            skipped for expressions with more operations than this.
        max_draws_factor (int): draws allowed per requested probe.
    """
    seed: int = DEFAULT_SEED
    probes: int = 64
    tolerance: float = 1e-9
    pole_delta: float = 1e-8
    real_box: Tuple[float, float] = (-1.3, 1.3)
    imag_box: Tuple[float, float] = (-0.4, 0.4)
    symbolic_ops_limit: int = 250
    max_draws_factor: int = 16

    @classmethod
    def from_dict(cls, params: dict) -> 'ProbeSettings':
        """Build settings from a dictionary, rejecting unknown keys.

        Args:
            params (dict): any subset of the dataclass fields.

        Raises:
            ValueError: if the dictionary has keys that are not settings.
        """
        known = [f.name for f in fields(cls)]
        unknown = [key for key in params if key not in known]
        if len(unknown) > 0:
            raise ValueError('Unknown probe settings: '
                             f'{unknown}. Valid keys are {known}')
        return cls(**params)

    def with_overrides(self, **kwargs) -> 'ProbeSettings':
        """Copy of the settings with the non-None keyword values replaced."""
        return replace(self, **{k: v for k, v in kwargs.items()
                                if v is not None})

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SimulationSettings:
    """Settings of the finite-difference validation runs."""
    sigma: float = 0.2
    newton_tolerance: float = 1e-12
    newton_max_iterations: int = 50
    gradient_guard: float = 1e-10


DEFAULT_SETTINGS = ProbeSettings()
DEFAULT_SIMULATION_SETTINGS = SimulationSettings()
