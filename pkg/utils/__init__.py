"""
Utilities package for the TRK toolkit.
"""

from .file_manager import file_manager, FileManager
from .analytics import analytics, Analytics
from .kriging import Dataset, FittedModel, RegressionBasis, Theta, predict, predict_mse
from .objective import PenaltySpec
from .optimizer import FitOptions, fit_trk, fit_uk
from .tuner import GscvConfig, gscv
from .runner import ExperimentConfig, ModelSpec, run_experiment, emit_report, sensitivity_sweep

__all__ = [
    'file_manager',
    'FileManager',
    'analytics',
    'Analytics',
    'Dataset',
    'FittedModel',
    'RegressionBasis',
    'Theta',
    'predict',
    'predict_mse',
    'PenaltySpec',
    'FitOptions',
    'fit_trk',
    'fit_uk',
    'GscvConfig',
    'gscv',
    'ExperimentConfig',
    'ModelSpec',
    'run_experiment',
    'emit_report',
    'sensitivity_sweep'
]
