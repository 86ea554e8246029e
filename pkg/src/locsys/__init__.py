"""Representation varieties of finitely presented groups over Z/p^k.

Enumeration of Hom(G, GL_n(Z/p^k)), framed membership and framing
subgroups, Ad(rho) group cohomology, p-power lifting towers, and
conjugation-orbit groupoids, everything in exact integer arithmetic.
"""

from .cohomology import (
    CocycleSpace,
    ObstructionVector,
    cocycle_spaces,
    h0_basis,
    lift_obstruction,
    relator_linearization,
)
from .errors import (
    BoundExceededError,
    BudgetExceededError,
    IndexOverflowError,
    LocsysError,
    NotAUnitError,
    NotInCongruenceSubgroupError,
    ShapeViolationError,
    WordSyntaxError,
)
from .lifting import (
    LiftFiber,
    LiftTower,
    STATUS_EMPTY,
    STATUS_TORSOR,
    count_lifts_bruteforce,
    fiber_elements,
    lift_step,
    lift_tower,
)
from .orbits import Orbit, OrbitGroupoid, conjugate_rep, groupoid_mass, orbit_decomposition
from .repvar import (
    FramedWitness,
    Representation,
    burnside_closure,
    enumerate_reps,
    find_framing_subgroup,
    framed_membership,
    is_representation,
    why_not_representation,
)
from .ring import (
    CoeffRing,
    Matrix,
    congruence_element_order,
    congruence_level,
    congruence_subgroup_order,
    enumerate_gl,
    gl_order,
    identity,
    is_invertible,
    mat_from_rows,
    mat_inverse,
    mat_mul,
    mat_pow,
    matrix_from_json,
    matrix_to_json,
)
from .words import (
    FoxDerivative,
    Presentation,
    SubgroupData,
    Word,
    fox_derivative,
    fox_eval,
    free_group,
    parse_word,
    schreier_subgroup,
    word_concat,
    word_eval,
    word_inverse,
    word_pow,
    word_reduce,
    word_to_string,
)

__version__ = "0.1.0"
