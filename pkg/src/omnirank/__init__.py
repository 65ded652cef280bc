"""OMNIRank: multi-branch neural risk scoring and ranking for P2P lending
platforms, with the full surrounding pipeline (cleaning, topic/sentiment/
graph features, rolling temporal evaluation, ranking export)."""

__version__ = "0.1.0"

from .domain import (
    FeatureBundle,
    Label,
    MonthlySeries,
    PlatformRecord,
    RiskScore,
    TextDocument,
    format_month,
    label_at,
    month_index,
    parse_month,
)
from .errors import ConfigError, DataError, NumericError, OmniRankError

__all__ = [
    "ConfigError",
    "DataError",
    "FeatureBundle",
    "Label",
    "MonthlySeries",
    "NumericError",
    "OmniRankError",
    "PlatformRecord",
    "RiskScore",
    "TextDocument",
    "format_month",
    "label_at",
    "month_index",
    "parse_month",
    "__version__",
]
