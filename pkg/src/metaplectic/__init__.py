"""Symplectic matrix algebra, discrete metaplectic operators, time-frequency
distributions, and weighted mixed-norm verification."""

from .grids import DiscreteSignal, GridSpec, gaussian, random_gaussian_mix, tensor
from .matrices import FLOAT, RATIONAL, Matrix, block_matrix, from_numpy
from .symplectic import (
    BlockView,
    Submatrices,
    block_swap,
    chirp_matrix,
    dilation_matrix,
    interleave_permutation,
    is_symplectic,
    lift_matrix,
    named_matrix,
    paired_submatrices,
    partial_fourier_matrix,
    quarter_blocks,
    random_invertible,
    random_symmetric,
    random_symplectic_word,
    random_unimodular,
    reassemble,
    stft_matrix,
    symplectic_form,
    tau_wigner_matrix,
)
from .shift_invertible import (
    CGTriple,
    ShiftInvertibleData,
    chirp_twist,
    compose_triple,
    deformation,
    factorize,
    is_shift_invertible,
    reconstruct_blocks,
    reflect_conjugate,
    shift_block,
    shift_invertible_data,
    window_symplectic,
)
from .operators import (
    GeneratorFactor,
    GeneratorWord,
    chirp_mul,
    decompose_generators,
    dilate,
    fourier,
    free_kernel_apply,
    inverse_fourier,
    metaplectic_apply,
    partial_fourier_2,
    schrodinger,
    tf_shift,
)
from .distributions import (
    TFGrid,
    conjugate_rihaczek_closed,
    covariance_check,
    distribution_evaluator,
    reproducing_check,
    rihaczek_closed,
    stft,
    tau_wigner,
    wigner_general,
    wigner_via_normal_form,
)
from .norms import (
    MixedNormParams,
    Weight,
    check_moderate,
    counterexample_swap_ratio,
    dilate_table,
    dilation_constant,
    dilation_norm_ratio,
    equivalence_check,
    mixed_norm,
    modulation_norm,
    swap_rotate,
)

__version__ = "0.1.0"
