"""Statistical modeling of physical laws from noisy paired measurements.

Builds kernel density estimates whose kernel is the calibrated scattering
function of the instrument, derives entropy-based statistics (experimental
information, redundancy, cost, complexity) to pick the proper number of
samples, and extracts the law as a conditional-average predictor with a
quantified quality score.
"""

from .density import Dataset, DensityModel, Sample, read_dataset_csv, write_dataset_csv
from .errors import (DegenerateVariance, EmptyDataset, ExperimentModelError,
                     InvalidGrid, InvalidParameter, InvalidSchedule,
                     OutOfDomain, ShapeMismatch)
from .generator import GenerationMeta, generate, logistic_step
from .information import (InfoCurve, InfoRecord, QuadratureGrid,
                          default_schedule, entropy_quadrature,
                          experimental_information, indeterminacy, info_curve)
from .predictor import (CaPredictor, QualityReport, ca_quality_theoretical,
                        predictor_quality, quality_sweep,
                        write_predictions_csv, write_quality_csv)
from .scattering import ScatteringFunction, SpanConfig, gaussian_eval

__version__ = "0.1.0"

__all__ = [
    "CaPredictor",
    "Dataset",
    "DegenerateVariance",
    "DensityModel",
    "EmptyDataset",
    "ExperimentModelError",
    "GenerationMeta",
    "InfoCurve",
    "InfoRecord",
    "InvalidGrid",
    "InvalidParameter",
    "InvalidSchedule",
    "OutOfDomain",
    "QualityReport",
    "QuadratureGrid",
    "Sample",
    "ScatteringFunction",
    "ShapeMismatch",
    "SpanConfig",
    "ca_quality_theoretical",
    "default_schedule",
    "entropy_quadrature",
    "experimental_information",
    "gaussian_eval",
    "generate",
    "indeterminacy",
    "info_curve",
    "logistic_step",
    "predictor_quality",
    "quality_sweep",
    "read_dataset_csv",
    "write_dataset_csv",
    "write_predictions_csv",
    "write_quality_csv",
]
