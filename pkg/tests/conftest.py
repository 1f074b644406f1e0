import numpy as np
import pytest

import gwcorr
from gwcorr import _accel


@pytest.fixture(scope="session", autouse=True)
def _warm_compiled_kernels():
    """Trigger numba compilation once so individual tests time fairly."""
    ds = gwcorr.synth_dataset(16, 3, seed=0)
    dm, coords, _ = gwcorr.listwise_complete(ds, ds.variable_names)
    for mode, controls in (("correlation", ()), ("partial_correlation", ("var_2",))):
        spec = gwcorr.AnalysisSpec(mode=mode, method="pearson", var_a="var_0",
                                   var_b="var_1", controls=controls,
                                   kernel="bisquare", bandwidth_proportion=0.5)
        gwcorr.compute_surface(dm, coords, spec)
    gwcorr.weight_vector_at(0, coords, "gaussian", 0.5)
    gwcorr.moore_penrose_pinv(np.eye(3))
    _accel.chol_inverse(np.eye(3))
    gwcorr.weighted_covariance(dm.values, np.ones(dm.n))
