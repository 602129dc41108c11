"""Hausdorff averaging operators on modulation and Wiener amalgam spaces.

The package is organized bottom-up:

- :mod:`hausmod.grid` — sampling grids, continuous-convention FFTs, norms,
  band-limited resampling;
- :mod:`hausmod.timefreq` — short-time Fourier transform, frequency-uniform
  decomposition, modulation / Wiener amalgam norms;
- :mod:`hausmod.hausdorff` — radial power-law kernels, the averaging operator
  and its companion, admissibility / sharp-condition evaluation, identity
  checks;
- :mod:`hausmod.witness` — log-divergent witness functions and the lower
  bound experiments that exhibit unboundedness for sharp-divergent kernels;
- :mod:`hausmod.corpus`, :mod:`hausmod.harness`, :mod:`hausmod.cli` — the
  regression corpus, named verification suites, reports, and the command-line
  front end.
"""

from .grid import (
    GridFunction,
    GridSpec,
    dilate,
    fourier_transform,
    inner_product,
    inverse_fourier_transform,
    lp_norm,
)
from .hausdorff import (
    ConditionReport,
    QuadratureSpec,
    RadialKernel,
    apply_hausdorff,
    apply_hausdorff_tilde,
    check_conditions,
    moment_integral,
)
from .timefreq import (
    DecompositionFamily,
    SpaceParams,
    SpectralTailError,
    box_operator,
    build_decomposition,
    modulation_norm_continuous,
    modulation_norm_discrete,
    stft,
    wiener_norm,
)
from .witness import (
    ExperimentCurve,
    WitnessSpec,
    build_fN,
    build_gN,
    build_shell_functions,
    lower_bound_experiment_modulation,
    lower_bound_experiment_wiener,
    witness_grid,
)

__version__ = "0.1.0"
