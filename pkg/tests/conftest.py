import numpy as np
import pytest

from modules.algebra_core import AlgebraSpec, construct
from modules.geometry import curvature_model, curvature_survey, fit_table_scale, symmetric_space
from modules.grassmann_search import OptimizerConfig

ALGEBRAS = {
    "so(1,4)": AlgebraSpec("so", 1, 2),
    "so(2,4)": AlgebraSpec("so", 2, 2),
    "so(3,4)": AlgebraSpec("so", 3, 2),
    "sp(1,1)": AlgebraSpec("sp", 1, 1),
    "sp(1,2)": AlgebraSpec("sp", 1, 2),
    "sp(2,2)": AlgebraSpec("sp", 2, 2),
}

QUICK_OPTIMIZER = OptimizerConfig(restarts=10)
QUICK_SAMPLES = 20000

_pipelines = {}
_surveys = {}


def build_pipeline(label):
    if label not in _pipelines:
        _pipelines[label] = construct(ALGEBRAS[label])
    return _pipelines[label]


def build_survey(label):
    """(base curvature model, survey, table fit) with a reduced sampling budget."""
    if label not in _surveys:
        model = curvature_model(symmetric_space(build_pipeline(label).structure))
        survey = curvature_survey(model, QUICK_SAMPLES, QUICK_OPTIMIZER, seed=0)
        _surveys[label] = (model, survey, fit_table_scale(survey, ALGEBRAS[label]))
    return _surveys[label]


@pytest.fixture(scope="session")
def pipeline_for():
    return build_pipeline


@pytest.fixture(scope="session")
def survey_for():
    return build_survey


@pytest.fixture(scope="session", params=list(ALGEBRAS))
def pipeline(request):
    return build_pipeline(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
