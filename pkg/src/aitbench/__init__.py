"""A desk-scale laboratory for algorithmic information theory.

Everything is computed exactly on one concrete prefix machine under an
explicit enumeration budget; every derived value carries a certainty flag
recording whether a larger budget could still move it.
"""

from .core import Certainty, bitstrings_of_length, bitstrings_up_to
from .encoding import (
    Dyadic,
    common_prefix_len,
    nat_code,
    nat_code_len,
    nat_decode,
    pair_code_len,
    pair_decode,
    pair_encode,
)
from .errors import (
    AitbenchError,
    BudgetNotLarger,
    CountNeverReached,
    EmptyProfile,
    MalformedCode,
    NoSufficientModel,
    NotExact,
    NotMember,
    NotProducible,
    NotStabilized,
    OutOfBudget,
    PrefixNotReached,
    PrefixTooShort,
    UsageError,
    VersionMismatch,
)
from .machine import MACHINE_VERSION, ExecutionResult, RunStatus, run
from .enumeration import (
    Budget,
    HaltingTable,
    badger,
    busy_beaver,
    clock_time,
    halting_from_count,
    halting_from_omega,
    inverse_busy_beaver,
    omega_approx,
    stabilized_bits_at,
    sweep,
)
from .profiles import (
    GraphFn,
    Profile,
    boundary,
    close,
    closeness,
    graphs,
    sharp_finish,
    sum_profiles,
    translate,
    x_graph,
    y_graph,
)
from .complexity import (
    Report,
    ShortestProgram,
    TimeProfile,
    busy_time,
    chain_rule_report,
    clock_gap_report,
    depth_pair_report,
    expected_theta,
    k_of,
    kt_of,
    mutual_info,
    producers,
    time_profile,
)
from .algostats import (
    DescProfile,
    Model,
    SurveyReport,
    ThetaProfiles,
    TwoPartDescription,
    antistochasticity,
    csoph,
    decode_set,
    desc_profile,
    encode_set,
    equivalence_report,
    models_of,
    reconstruct_theta,
    soph,
    soph_free,
    soph_pair_report,
    structure_functions,
    survey,
    theta_profiles,
    two_part,
)
from .halting_info import (
    ReachCurve,
    build_delta,
    build_gamma,
    hmd,
    holographic_rank,
    late_halter_table,
    late_halters,
    reach_comparison,
    reach_curve,
    reach_via_badger,
    reassemble,
)
from .workspace import Tables, load, store, table_filename
from .reporting import (
    export_plot,
    import_plot,
    report_csv,
    report_json,
    theta_pair_csv,
)

__version__ = "0.1.0"
