"""Exact free-fermion solution of the transverse-field XY ring and the
nearest-neighbour concurrence of its ground and excited states."""

__version__ = "0.1.0"

from .combinatorics import subspace_dimension
from .concurrence import (ConcurrenceResult, NNDensityMatrix, concurrence, concurrence_xstate, rdm_nn,
                          validate_rdm, wootters_general)
from .correlators import (Correlators, Direction, ModeTable, OccupationSet, build_mode_table, correlators_of,
                          energy_of, toggle_mode)
from .errors import ConfigError, NumericalIntegrityError
from .scanner import RecordBatch, RecordCollector, ScanPolicy, ScanSummary, StateRecord, max_concurrence, scan_subspace
from .spectrum import Grid, ModeEntry, ModelParams, bogoliubov_angle, build_kgrid, dispersion, special_fields
from .statistics import Histogram, SweepSeries, derivative_series, dis_histogram, does_histogram, ground_sweep

__all__ = [
    "ConcurrenceResult", "ConfigError", "Correlators", "Direction", "Grid", "Histogram", "ModeEntry", "ModeTable",
    "ModelParams", "NNDensityMatrix", "NumericalIntegrityError", "OccupationSet", "RecordBatch", "RecordCollector",
    "ScanPolicy", "ScanSummary", "StateRecord", "SweepSeries", "bogoliubov_angle", "build_kgrid", "build_mode_table",
    "concurrence", "concurrence_xstate", "correlators_of", "derivative_series", "dis_histogram", "dispersion",
    "does_histogram", "energy_of", "ground_sweep", "max_concurrence", "rdm_nn", "scan_subspace", "special_fields",
    "subspace_dimension", "toggle_mode", "validate_rdm", "wootters_general",
]
