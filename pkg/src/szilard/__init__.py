"""Finite-time quantum Szilard engine: measurement dynamics, information and thermodynamics."""

from .errors import (
    BadFlag,
    BadValue,
    ConfigError,
    EmptyInput,
    NoSignChange,
    NoThreshold,
    NonConvergence,
    NonFiniteObjective,
    NumericalError,
    SzilardError,
    UndefinedEfficiency,
    UnknownKey,
)
from .information import (
    IdealityPoint,
    ideality,
    ideality_long_time,
    ideality_point,
    ideality_short_time,
    mutual_info,
    p_of_t,
)
from .numerics import (
    Interval,
    erf,
    find_root_monotone,
    integrate,
    maximize_1d,
    maximize_2d,
    sample_uniform_pairs,
)
from .thermo import (
    CyclePoint,
    DissipationParams,
    EmpResult,
    EngineParams,
    Performance,
    efficiency_stage1,
    efficiency_two_time,
    emp_carnot,
    emp_stage1,
    emp_two_time,
    exceed_width,
    optimal_times_carnot,
    output_power,
    power_carnot,
    power_stage1,
    power_two_time,
    threshold_time,
    work_erase,
    work_output_lowdiss,
    work_stage1,
)
from .tradeoff import EnvelopeCurve, TradeoffPoint, cloud_two_time, curve_stage1, envelope
from .wavepacket import (
    MeasurementParams,
    SpinBranch,
    WavePacketParams,
    half_line_probability_numeric,
    overlap_closed,
    overlap_numeric,
    propagator,
    psi_branch,
    psi_initial,
)

__version__ = "0.1.0"
