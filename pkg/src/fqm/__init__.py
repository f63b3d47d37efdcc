"""Finite quantum mechanics over Z_N: metaplectic maps and their CRT fast path."""

from .crtfast import (
    BenchReport,
    FactoredMap,
    OpCounter,
    PermutationMap,
    apply_factored,
    bench_apply,
    build_R,
    factor_map,
    tensor_compose,
)
from .dynamics import TorusPoint, orbit, orbit_partition, order_mod
from .heisenberg import ToleranceConfig, WeylIndex, clock_shift, fourier_basis, weyl_element
from .metaplectic import (
    build_U,
    build_U_prime_power,
    delta,
    gauss_sum,
    intertwine_residual,
    oracle_U,
    trick_normalize,
)
from .modarith import (
    SinoContext,
    SL2Element,
    crt_join_sl2,
    crt_split_sl2,
    factor_odd,
    is_in_O2,
    mod_inverse,
    sino_context,
    sino_decompose,
    sino_recompose,
)

__version__ = "0.1.0"
