"""Zero-energy bound states of graphene in the well -lambda sech x + mu tanh x."""
from .analytic import (
    ModeError,
    ZeroMode,
    psi1_value,
    psi2_value,
    spinor_value,
    zero_mode,
    zero_mode_count,
    zero_mode_spectrum,
)
from .kernels import BACKEND
from .model import (
    Branch,
    InvalidRegimeError,
    PotentialParams,
    Regime,
    ScarfParams,
    SpinorSample,
    classify_regime,
    effective_potential,
    potential_value,
    scarf_parameters,
    scarf_potential_value,
)
from .numeric import Grid, ShootingResult, dirac_residual, shoot_spectrum

__version__ = "0.1.0"
