"""Binary quadratic forms, class groups and factoring with the Simerka map."""

from .arith import FactoredRational
from .composition import compose, inverse, power
from .factorizer import FactorConfig, FactorResult, factor
from .forms import Discriminant, QForm, principal_form, reduce
from .relations import class_group, element_order, group_structure
from .simerka_map import build_factor_base, prime_form, simerka_value

__version__ = "0.1.0"
