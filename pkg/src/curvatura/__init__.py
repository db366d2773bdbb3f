"""
curvatura: higher-order relative mean curvatures, the Euler-Lagrange operator of
their total integrals, tube volumes and austerity checks for parametrized
submanifolds of Euclidean space, space forms and complex projective space.
"""

from .ambient import AmbientSpace, EuclideanSpace, FubiniStudySpace, Jet, SpaceForm
from .checks import CheckRouter, CheckRouterEntry, router
from .config import ManifoldSpec, RunConfig, Steps, Tolerances
from .errors import (
    CurvaturaError,
    DomainError,
    FocalRadiusError,
    FrameDegeneracyError,
    ImmersionDegeneracyError,
    NumericError,
    PreconditionError,
    StencilError,
    UnsupportedOperationError,
    UsageError,
)
from .frames import local_geometry
from .immersion import (
    DeformationField,
    ImmersionPatch,
    ParameterDomain,
    SubmanifoldMesh,
    build_mesh,
    deform,
    random_deformation_field,
)
from .interfaces import CheckContext, CheckHandler, CheckRouterInterface, ReportWriter
from .invariants import h2p1_at, k2p_at
from .parsers import ConfigParserBase, JsonConfigParser, TomlConfigParser, parser_for_path
from .reports import CheckOutcome, CsvReportWriter, InMemoryReportWriter, JsonReportWriter, Report, Verdict
from .runner import CheckRunner
from .tubes import austerity_check, tube_report, tubular_minimality_report, weyl_gray_volume
from .variational import el_operator_at, first_variation_check, total_mean_curvature
from .zoo import ManifoldZoo, ZooEntry, zoo

__all__ = [
    "AmbientSpace",
    "CheckContext",
    "CheckHandler",
    "CheckOutcome",
    "CheckRouter",
    "CheckRouterEntry",
    "CheckRouterInterface",
    "CheckRunner",
    "ConfigParserBase",
    "CsvReportWriter",
    "CurvaturaError",
    "DeformationField",
    "DomainError",
    "EuclideanSpace",
    "FocalRadiusError",
    "FrameDegeneracyError",
    "FubiniStudySpace",
    "ImmersionDegeneracyError",
    "ImmersionPatch",
    "InMemoryReportWriter",
    "Jet",
    "JsonConfigParser",
    "JsonReportWriter",
    "ManifoldSpec",
    "ManifoldZoo",
    "NumericError",
    "ParameterDomain",
    "PreconditionError",
    "Report",
    "ReportWriter",
    "RunConfig",
    "SpaceForm",
    "StencilError",
    "Steps",
    "SubmanifoldMesh",
    "Tolerances",
    "TomlConfigParser",
    "UnsupportedOperationError",
    "UsageError",
    "Verdict",
    "ZooEntry",
    "austerity_check",
    "build_mesh",
    "deform",
    "el_operator_at",
    "first_variation_check",
    "h2p1_at",
    "k2p_at",
    "local_geometry",
    "parser_for_path",
    "random_deformation_field",
    "router",
    "total_mean_curvature",
    "tube_report",
    "tubular_minimality_report",
    "weyl_gray_volume",
    "zoo",
]
