from .normalization import normalization_constant, FracParams
from .kernel_table import KernelTable, tail_integral
from .operator import (frac_laplacian_apply, frac_laplacian_apply_fast,
                       gagliardo_energy, dirichlet_pairing)
from .oracles import constant_field_check, profile_check, symbol_check, symbol_ratio
