"""Box-counting dimension of spiral trajectories of damped linear oscillators."""

from ._spiraldim import (
    DampingSpec,
    DomainError,
    FitDegenerateError,
    FitModel,
    Method,
    NotSpiralError,
    PolarCurve,
    RangeError,
    SpiralDimError,
    TruncationError,
    WindowPolicy,
    box_count,
    build_profile,
    check_derivative_criterion,
    check_spiral_criterion,
    classify_rectifiability,
    epsilon_ladder,
    estimate_dimension,
    exp_spiral,
    fit_alpha,
    fit_dimension,
    power_spiral,
    predict_dimension,
    reproduce_table,
    sausage_area,
    simulate,
    trajectory_curve,
)

__version__ = "0.1.0"
