"""
Handlers package for the TRK toolkit.
Contains one handler per CLI subcommand.
"""

from .start import about_command, check_command
from .sample import sample_command
from .fit import fit_command, predict_command
from .tune import tune_command
from .diag import diag_command
from .bench import bench_command, sweep_command

__all__ = [
    'about_command',
    'check_command',
    'sample_command',
    'fit_command',
    'predict_command',
    'tune_command',
    'diag_command',
    'bench_command',
    'sweep_command'
]
