"""disco: scatterplot discrepancy as a global sensitivity measure.

Core surface: quasi-random sampling (`sampling`), input distributions
(`distributions`), seeded test models (`metafunction`), seven uniformity
measures (`discrepancy`), importance and ranking agreement (`sensitivity`),
and the randomized benchmark plus scaling study (`benchmark`, `timing`).
"""

from .discrepancy import (
    ALL_KINDS,
    CLOSED_FORM_KINDS,
    DiscrepancyValue,
    MeasureKind,
    centered_l2,
    compute,
    modified_l2,
    s_ersatz,
    star_l2,
    symmetric_l2,
    unanchored_l2,
    wraparound_l2,
)
from .distributions import InputDistribution, quantile, setting_from_index, transform
from .metafunction import MetaFunction, build_metafunction, evaluate, evaluate_matrix
from .sampling import DesignPair, SamplerKind, SamplerMethod, build_design_pair, generate
from .sensitivity import (
    AgreementResult,
    ImportanceVector,
    TotalOrderIndices,
    agreement,
    discrepancy_importance,
    importance_profile,
    jansen_total_order,
    pearson_r,
    savage_scores,
)

__version__ = "0.1.0"
