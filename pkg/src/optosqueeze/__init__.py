"""optosqueeze: pulsed two-mode squeezing in levitated optomechanics.

This package propagates the covariance of a levitated particle coupled to a
cavity and its output mode, scores pulses by generalized two-mode squeezing
and optimizes pulse shapes with a Gaussian-process Bayesian optimizer.
"""

__version__ = "0.1.0"

from optosqueeze.config import OptoSqueezeSettings  # noqa: E402
from optosqueeze.dynamics import SystemParams  # noqa: E402
from optosqueeze.pulses import PulseConfig  # noqa: E402

__all__ = ["OptoSqueezeSettings", "SystemParams", "PulseConfig", "__version__"]
