"""Sea-surface temperature forecasting, fish migration, and fleet economics.

The toolkit is organised as small focused modules:

- ``sst_data``:   vertex-sample ingestion, grid fields, raster rendering
- ``tdf``:        time-domain feature vectors and training pairs
- ``lstm``:       from-scratch LSTM, BPTT training, rolling forecasts
- ``fishstats``:  species thermal profiles and transition probabilities
- ``eca``:        the cellular-automata migration engine
- ``scenario``:   warming-rate scenarios and elapsed-time queries
- ``econ``:       voyage profit, sensitivities, strategy advice
- ``synthetic``:  seeded fixture generators
- ``cli``:        the ``fishcast`` command-line pipeline
"""

__version__ = "0.1.0"

from . import cli, econ, eca, fishstats, lstm, scenario, sst_data, synthetic, tdf
from .fishstats import FishProfile, fit_normal, livable_range, transition_probability
from .sst_data import GridExtent, GridField, LandMask, SstSeriesStore

__all__ = [
    "cli",
    "econ",
    "eca",
    "fishstats",
    "lstm",
    "scenario",
    "sst_data",
    "synthetic",
    "tdf",
    "FishProfile",
    "fit_normal",
    "livable_range",
    "transition_probability",
    "GridExtent",
    "GridField",
    "LandMask",
    "SstSeriesStore",
    "__version__",
]
