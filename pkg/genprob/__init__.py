from .ahsp import HspInstance, plan_iterations, simulate_ahsp  # noqa
from .base import AbelianGroup, NilpotentProfile, parse_group  # noqa
from .bounds import bound_report, len_bound, rank_bound  # noqa
from .errors import GuaranteeError, InvalidInputError  # noqa
from .errors import ResourceLimitError  # noqa
from .probability import phi_abelian, phi_profile  # noqa
from .subgroup import Subgroup  # noqa
