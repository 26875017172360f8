from .bounds import bounds_check, positivity_volume, boundary_proximity
from .holder import HolderEstimate, holder_seminorm, holder_trace, auto_stride
from .free_boundary import FreeBoundaryExtract, free_boundary_extract
from .growth import (NondegeneracyScan, DensityScan, nondegeneracy_scan, density_check,
                     default_radii)
from .harnack import HarnackResult, harnack_ratio
from .summary import diagnostics_summary, SECTIONS
