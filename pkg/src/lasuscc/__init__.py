"""lasuscc: localized-active-space selected-UCCSD emulation on a statevector.

The pipeline: fragment-local CI state preparation, qubit-side assembly of the
product state, gradient screening of a generalized UCCSD generator pool,
first-order Trotterized variational optimization of the selected subset, and
gate-resource accounting — all validated against exact diagonalization.
"""

from importlib.metadata import PackageNotFoundError, version as _version

try:
    __version__ = _version("lasuscc")
except PackageNotFoundError:  # pragma: no cover - uninstalled source tree
    __version__ = "0.0.0+unknown"

from .ansatz import (
    Generator,
    GeneratorPool,
    count_doubles_full,
    count_parameters,
    enumerate_pool,
    gradient_histogram,
    screen_gradients,
    select,
)
from .fcidump import (
    FragmentLayout,
    JobConfig,
    read_fcidump,
    write_fcidump,
)
from .geometry import Geometry, h2_clusters, hydrogen_chain
from .integrals import (
    AoIntegrals,
    IntegralSet,
    RhfResult,
    ao_to_mo,
    build_sto3g_hydrogen,
    localize_per_fragment,
    rhf,
)
from .kernels import backend_name
from .las import LasState, assemble_statevector, las_qubit_space, lasci
from .qubit import (
    MappedHamiltonian,
    PauliString,
    PauliSum,
    QubitSpace,
    Statevector,
    compile_excitation,
    expectation,
    jw_hamiltonian,
)
from .resources import (
    GateCountEstimate,
    estimate,
    percent_cnot,
    split_from_gate_counts,
)
from .vqe import (
    SweepRecord,
    TrotterAnsatz,
    VqeResult,
    energy,
    gradient,
    minimize,
    sweep,
    yamaguchi_j,
)
from .workflow import (
    SystemData,
    casci_reference,
    prepare_fcidump_system,
    prepare_geometry_system,
    prepare_h2_cluster_system,
    prepare_system,
)

__all__ = [
    "__version__",
    "Geometry",
    "h2_clusters",
    "hydrogen_chain",
    "AoIntegrals",
    "IntegralSet",
    "RhfResult",
    "ao_to_mo",
    "build_sto3g_hydrogen",
    "localize_per_fragment",
    "rhf",
    "FragmentLayout",
    "JobConfig",
    "read_fcidump",
    "write_fcidump",
    "backend_name",
    "PauliString",
    "PauliSum",
    "Statevector",
    "QubitSpace",
    "MappedHamiltonian",
    "compile_excitation",
    "expectation",
    "jw_hamiltonian",
    "LasState",
    "lasci",
    "assemble_statevector",
    "las_qubit_space",
    "Generator",
    "GeneratorPool",
    "enumerate_pool",
    "count_parameters",
    "count_doubles_full",
    "screen_gradients",
    "select",
    "gradient_histogram",
    "GateCountEstimate",
    "estimate",
    "percent_cnot",
    "split_from_gate_counts",
    "TrotterAnsatz",
    "VqeResult",
    "SweepRecord",
    "energy",
    "gradient",
    "minimize",
    "sweep",
    "yamaguchi_j",
    "SystemData",
    "prepare_system",
    "prepare_geometry_system",
    "prepare_h2_cluster_system",
    "prepare_fcidump_system",
    "casci_reference",
]
