"""Models for liemaps."""

from .system import PolynomialSystem
from .polymap import PolynomialMap
from .trajectory import TrajectoryDataset, FitReport
from .burgers import BurgersConfig, Field, StencilMap, BenchmarkRow
from .run_config import RunConfig
