"""Information-theoretic indicators of university-industry-government relations."""
from .aggregate import AddressRecord, SubsetTable, address_census, aggregate, international_subset, label_record
from .classify import CountryGroups, RuleSet, SectorLabel, classify_address, tag_countries
from .entropy import (
    CellCube,
    Distribution,
    InformationValue,
    info_of_message,
    marginalize,
    shannon_entropy,
    transmission2,
    transmission3,
)
from .errors import (
    ConfigurationError,
    ConsistencyError,
    DegenerateDistributionError,
    DomainError,
    HelixError,
    ParseError,
    ValidationError,
)
from .overlap import ConsistencyReport, CountVector, decompose, recompose, transmission_from_counts
from .systemness import (
    SeriesFrame,
    SystemnessResult,
    best_start_prediction,
    observed_distribution,
    predict_markov,
    predict_timeseries,
    systemness_test,
    trend_fit,
)

__version__ = "0.1.0"

__all__ = [
    "AddressRecord",
    "CellCube",
    "ConfigurationError",
    "ConsistencyError",
    "ConsistencyReport",
    "CountVector",
    "CountryGroups",
    "DegenerateDistributionError",
    "Distribution",
    "DomainError",
    "HelixError",
    "InformationValue",
    "ParseError",
    "RuleSet",
    "SectorLabel",
    "SeriesFrame",
    "SubsetTable",
    "SystemnessResult",
    "ValidationError",
    "address_census",
    "aggregate",
    "best_start_prediction",
    "classify_address",
    "decompose",
    "info_of_message",
    "international_subset",
    "label_record",
    "marginalize",
    "observed_distribution",
    "predict_markov",
    "predict_timeseries",
    "recompose",
    "shannon_entropy",
    "systemness_test",
    "tag_countries",
    "transmission2",
    "transmission3",
    "transmission_from_counts",
    "trend_fit",
]
