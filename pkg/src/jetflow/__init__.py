"""Dynamic equations, dynamic connections and geodesic equations on fibred configuration spaces."""

from .charts import ChartTransform, galilean_boost, identity_chart, linear_chart, rotating_chart
from . import errors
from .errors import (JetflowError, DomainError, NonFiniteValue, SingularJacobian, SingularMetric, SingularMass,
                     NotAffine, ChartNotAdapted, NotQuadraticResidual, NoHyperboloidPoint, TrajectoryMismatch,
                     NoOverlap, StepFailure, InvariantViolation, ParseError, UnknownSymbol, DimensionMismatch)
from .expr import JetPoint, ScalarField, TangentPoint, Vars, const, cos, exp, log, sin, sqrt
from .frames import (ReferenceFrame, frame_connection, frame_lift, relative_acceleration, relative_velocity,
                     transform_frame, vertical_covariant_residual)
from .integrate import IntegratorConfig, Trajectory, compare_trajectories, integrate_geodesic, integrate_sode
from .jet import (AffineDynamicConnection, DynamicConnection, DynamicEquation, NotQuadratic, QuadraticSODE,
                  as_quadratic, connection_from_sode, resymmetrize, sode_from_connection, transform_connection,
                  transform_sode)
from .parser import parse_field
from .relativistic import (NotLorentzType, PseudoMetric, QuadraticLagrangian, christoffel, hyperboloid_check,
                           lagrange_sode, levi_civita, metric_from_lagrangian, nonrel_limit_compare, relativize)
from .tangent import (LinearTangentConnection, ManifoldSODE, SolderingPatch, TangentConnection, curvature,
                      frame_shift, geodesic_field, is_free_motion_candidate, lift_fibre_connection,
                      lift_to_tangent, quadratic_to_linear, sode_connection_on_manifold, soldering_alternative)
from .vectorfields import vhat_oracle

__all__ = [
    'errors', 'ChartTransform', 'galilean_boost', 'identity_chart', 'linear_chart', 'rotating_chart',
    'JetPoint', 'ScalarField', 'TangentPoint', 'Vars', 'const', 'cos', 'exp', 'log', 'sin', 'sqrt',
    'ReferenceFrame', 'frame_connection', 'frame_lift', 'relative_acceleration', 'relative_velocity',
    'transform_frame', 'vertical_covariant_residual', 'IntegratorConfig', 'Trajectory',
    'compare_trajectories', 'integrate_geodesic', 'integrate_sode', 'AffineDynamicConnection',
    'DynamicConnection', 'DynamicEquation', 'NotQuadratic', 'QuadraticSODE', 'as_quadratic',
    'connection_from_sode', 'resymmetrize', 'sode_from_connection', 'transform_connection', 'transform_sode',
    'parse_field', 'NotLorentzType', 'PseudoMetric', 'QuadraticLagrangian', 'christoffel',
    'hyperboloid_check', 'lagrange_sode', 'levi_civita', 'metric_from_lagrangian', 'nonrel_limit_compare',
    'relativize', 'LinearTangentConnection', 'ManifoldSODE', 'SolderingPatch', 'TangentConnection',
    'curvature', 'frame_shift', 'geodesic_field', 'is_free_motion_candidate', 'lift_fibre_connection',
    'lift_to_tangent', 'quadratic_to_linear', 'sode_connection_on_manifold', 'soldering_alternative',
    'vhat_oracle', 'JetflowError', 'DomainError', 'NonFiniteValue', 'SingularJacobian', 'SingularMetric',
    'SingularMass', 'NotAffine', 'ChartNotAdapted', 'NotQuadraticResidual', 'NoHyperboloidPoint',
    'TrajectoryMismatch', 'NoOverlap', 'StepFailure', 'InvariantViolation', 'ParseError', 'UnknownSymbol',
    'DimensionMismatch',
]
