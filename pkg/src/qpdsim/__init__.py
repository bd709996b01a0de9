"""Density-matrix simulation of two-choice decision dynamics.

Core objects: scenario specifications over prediction/action qubits, the
two-term interaction Hamiltonian, unitary trajectories, quantum-information
measures, sure-thing-principle deviation analysis, and interference-
hierarchy functionals for multi-slit probability assignments.
"""

from .dynamics import (
    DEFAULT_GAMMA,
    DEFAULT_MU,
    DEFAULT_SAMPLES,
    DEFAULT_T_MAX,
    HamiltonianParams,
    MeasurementOutcome,
    Trajectory,
    action_marginal,
    build_hamiltonian,
    evolve,
    measure_action,
    prediction_marginal,
    time_grid,
)
from .errors import (
    DimensionMismatchError,
    EmptyInputError,
    EmptyTrajectoryError,
    GridMismatchError,
    InvalidModelError,
    MissingSubsetError,
    NonHermitianError,
    NotNormalizedError,
    NotPositiveError,
)
from .interference import (
    QuantumSlitModel,
    SlitExperiment,
    interference_i2,
    interference_i3,
    pairwise_interference,
    random_slit_model,
    run_interference_survey,
    run_slit_model,
    slit_experiment_from_json,
    slit_experiment_to_json,
    subset_keys,
)
from .linalg import (
    HERM_TOL,
    PSD_TOL,
    UNITARY_TOL,
    Spectrum,
    assert_density_matrix,
    eig_hermitian,
    hermitian_eigenvalues,
    is_hermitian,
    partial_trace,
    tensor,
    unitary_from_hamiltonian,
)
from .measures import (
    MeasureRecord,
    MeasureSeries,
    average_measures,
    concurrence,
    entanglement_of_formation,
    l1_coherence,
    measure_series,
    measure_state,
    mutual_information,
    relative_entropy_coherence,
    time_average,
    trapezoid_mean,
    von_neumann_entropy,
)
from .report import (
    CaseAnalysis,
    ReproduceReport,
    analyze_case,
    analyze_catalog,
    load_reference_table,
    reproduce_all,
    table1_rows,
    table2_rows,
    table3_rows,
)
from .states import (
    BRANCHES,
    CATALOG_LABELS,
    BranchState,
    ScenarioSpec,
    SubsystemParams,
    catalog_case,
    chi_initial,
    classical_mental_state,
    initial_mental_state,
    load_scenario,
    qubit_state,
    scenario_from_config,
    scenario_to_config,
)
from .stp import (
    DELTA_EPS,
    StpRecord,
    StpVerdict,
    chi_at,
    chi_series,
    choice_probability,
    stp_delta,
    stp_delta_bound,
    stp_records,
    stp_verdict,
)

__version__ = "0.1.0"
