import numpy as np
import pytest

import pyfiles.models.weighted.weighted_funcs as weighted_funcs
import pyfiles.models.critical.critical_funcs as critical_funcs
from pyfiles.benchmark.oracle import nu_scan, oracle


@pytest.mark.parametrize('a2',[0.1,0.3,0.5,0.8,1.0])
def test_oracle_agrees_with_exact_solver(a2,rng):
    search=oracle(1.0,a2)
    for y in rng.standard_normal((100,4)):
        _,E=critical_funcs.optimal_unweighted(y,1.0,a2)
        assert search.exact_error(y)==pytest.approx(E,rel=1e-6,abs=1e-12)


def test_oracle_residual_lies_on_cone():
    search=oracle(1.0,0.4)
    fit=search.fit(np.array([2.0,1.0,0.5,-0.3]))
    p=fit.params
    z=p['r'].value*search.cone_direction(p['phi1'].value,p['phi2'].value)
    q=np.array([1.0,-1.0,0.4,-0.4])
    assert abs(q@(z*z))<1e-10*(z@z)


def test_nu_scan_finds_closed_form(local_batch,rng):
    Y,a1,a2=local_batch(rng,20)
    for y in Y:
        nu,nu_star=nu_scan(y,a1,a2)
        assert nu_star==pytest.approx(weighted_funcs.optimal_nu(y,a1,a2),rel=1e-12)
        assert nu==pytest.approx(nu_star,rel=1e-3)
