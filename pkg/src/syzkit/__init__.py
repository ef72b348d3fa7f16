"""Free resolutions of homogeneous ideals over prime fields, computed by
lifting the Schreyer frame of leading syzygy terms."""

from .algebra import (
    DomainError,
    OpCounters,
    Ring,
    leading_term,
    module_lcm,
    monomial_divides,
    term_times_vector,
    vector_add,
)
from .orderings import (
    BaseOrdering,
    OrderingChain,
    cmp_base,
    cmp_induced,
    extend_chain,
)
from .groebner import (
    GroebnerBasis,
    buchberger,
    divide_with_remainder,
    is_groebner,
    m_coeff,
    s_vector,
)
from .frame import FrameLevel, SchreyerFrame, build_frame, frame_betti, lead_syz
from .lift import (
    SubtreeCache,
    lift_hybrid,
    lift_reduce,
    lift_subtree,
    lift_tree,
    lot,
    psi,
    syz_lift,
    syz_schreyer,
)
from .resolution import (
    BettiTable,
    GradedFreeModule,
    Resolution,
    betti_minimal_from_nonminimal,
    betti_nonminimal,
    block_rank,
    constant_block,
    hilbert_numerator,
    minimize,
    reorder_generators,
    resolve,
)
from .examples_gen import AgrIdeal, AgrSpec, gen_agr, gen_random_homogeneous
from .cli import InputDocument, ParseError, main, parse_input

__version__ = "0.1.0"
