"""Creative telescoping for differential forms with D-finite coefficients."""

from .dfinite import DFiniteElement, RectangularSystem, SystemBlock, df_from_rational, df_rational
from .errors import TelescoperError
from .field import RationalFunction, parse_expression
from .forms import DifferentialForm, d, d_s, dx, wedge
from .frontend import ProblemInstance, TelescoperResult, has_telescoper, verify
from .ore import OreOperator, WeylOperator, ore_gcrd, ore_lclm, ore_rdiv, ore_transform
from .poincare import Certificate, certificate_verify, telescope_closed
from .separability import SeparabilityOptions, SeparabilityVerdict, is_separable

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "DFiniteElement",
    "DifferentialForm",
    "OreOperator",
    "ProblemInstance",
    "RationalFunction",
    "RectangularSystem",
    "SeparabilityOptions",
    "SeparabilityVerdict",
    "SystemBlock",
    "TelescoperError",
    "TelescoperResult",
    "WeylOperator",
    "certificate_verify",
    "d",
    "d_s",
    "df_from_rational",
    "df_rational",
    "dx",
    "has_telescoper",
    "is_separable",
    "ore_gcrd",
    "ore_lclm",
    "ore_rdiv",
    "ore_transform",
    "parse_expression",
    "telescope_closed",
    "verify",
    "wedge",
]
