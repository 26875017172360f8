from .penalized import (EnergyBreakdown, penalized_energy, penalized_gradient,
                        limit_energy_J_eps, energy_values, smooth_gradient,
                        exterior_mask, default_tau_pos, h_volume, threshold_volume)
from .stationarity import Stationarity, stationarity, one_sided_residual, volume_on_kink
from .residuals import (ResidualReport, el_residual, variational_inequality_check,
                        variational_inequality_scan, admissible_test_fields,
                        admissibility_check, STAGES, CONTACT_TOL)
