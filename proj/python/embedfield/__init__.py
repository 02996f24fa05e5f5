"""Native field kernels from the embedfield C++ core."""

from ._core import (
    LameParams,
    ShapeMismatch,
    StructuredGrid,
    compute_gamma,
    error_norms,
    exact_nn_forward,
    hooke_native,
    lame_from_engineering,
    make_grid,
    native_fd_step,
    solve_heat,
    stiffness_matrix,
    symmetrize_gradient,
    synth_strain_field,
)

__version__ = "0.1.0"
