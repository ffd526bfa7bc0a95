import numpy as np
import pytest

from pyfiles.data_models.correspondence import correspondence
from pyfiles.data_models.errors import DegenerateData
import pyfiles.models.epipolar.epipolar_funcs as epipolar_funcs
import pyfiles.models.weighted.weighted_funcs as weighted_funcs


def _well_posed(Y,a1,a2):
    # drop points too close to the constraint set for relative comparisons
    _,P,Q=weighted_funcs._halves(Y,a1,a2)
    return (np.sqrt(P)-np.sqrt(Q))**2>1e-4*(P+Q)


def test_worked_example():
    y=np.array([2.0,1.0,0.0,0.0])
    assert weighted_funcs.optimal_nu(y,1.0,1.0)==pytest.approx(1.0,abs=1e-12)
    qd=weighted_funcs.quadratic_data(y,1.0,1.0,1.0)
    assert qd.alpha_plus==pytest.approx(1.0,abs=1e-12)
    sol=weighted_funcs.solve_weighted(y,1.0,1.0,1.0)
    assert sol.s_plus==pytest.approx(-1/3,abs=1e-12)
    assert np.allclose(sol.eps_plus,[-0.5,0.5,0.0,0.0],atol=1e-12)
    assert sol.unweighted_cost_plus==pytest.approx(0.5,abs=1e-12)
    assert sol.s_minus==pytest.approx(-3.0,abs=1e-12)


def test_linear_case_has_root_at_infinity():
    y=np.array([2.0,1.0,0.0,0.0])
    sol=weighted_funcs.solve_weighted(y,1.0,1.0,2.0)
    assert np.isinf(sol.s_minus)
    assert np.allclose(sol.eps_minus,-y)
    assert sol.s_plus==pytest.approx(-0.5,abs=1e-12)
    assert np.allclose(sol.eps_plus,[-2/3,1/3,0.0,0.0],atol=1e-12)


def test_on_model_point_needs_no_correction():
    y=np.array([1.0,1.0,0.3,0.3])
    sol=weighted_funcs.solve_weighted(y,0.8,0.3,1.7)
    assert np.allclose(sol.eps_plus,0,atol=1e-15)


def test_minimizer_satisfies_constraint(local_batch,rng):
    Y,a1,a2=local_batch(rng,1000)
    nu=rng.uniform(0.1,10,size=len(Y))
    sol,bad=weighted_funcs.solve_weighted_batch(Y,a1,a2,nu)
    assert not bad.any()
    q=np.array([a1,-a1,a2,-a2])
    Z=Y+sol.eps_plus
    g=epipolar_funcs.constraint_value(q,Z)
    assert np.all(np.abs(g)<=1e-10*max(a1,a2)*np.sum(Z**2+Y**2,axis=1))


def test_closed_form_identities(local_batch,rng):
    for _ in range(100):
        Y,a1,a2=local_batch(rng,1000)
        Y=Y[_well_posed(Y,a1,a2)]
        nu=rng.uniform(0.1,10,size=len(Y))
        qd=weighted_funcs.quadratic_data_batch(Y,a1,a2,nu)
        Y2=Y**2
        assert np.allclose(qd.Delta,4*nu**2*(nu+1)**2*qd.delta,rtol=1e-10,atol=0)
        assert np.allclose(qd.S*qd.T,(Y2[:,0]+Y2[:,2])*(Y2[:,1]+Y2[:,3])*qd.delta,rtol=1e-10,atol=0)
        sol,_=weighted_funcs.solve_weighted_batch(Y,a1,a2,nu)
        assert np.allclose(sol.weighted_cost_plus,nu/(nu+1)*qd.alpha_plus,rtol=1e-10,atol=0)
        want=qd.alpha_plus*(qd.S*nu**2+qd.T)/(qd.delta*(nu+1)**2)
        assert np.allclose(sol.unweighted_cost_plus,want,rtol=1e-10,atol=0)


def test_plus_root_dominates(local_batch,rng):
    for _ in range(100):
        Y,a1,a2=local_batch(rng,1000)
        nu=rng.uniform(0.1,10,size=len(Y))
        sol,_=weighted_funcs.solve_weighted_batch(Y,a1,a2,nu)
        slack=1e-12*np.sum(Y**2,axis=1)
        assert np.all(sol.weighted_cost_plus<=sol.weighted_cost_minus+slack)
        assert np.all(sol.unweighted_cost_plus<=sol.unweighted_cost_minus+slack)


def test_optimal_nu_is_stationary(local_batch,rng):
    for _ in range(100):
        Y,a1,a2=local_batch(rng,1)
        y=Y[0]
        nu=weighted_funcs.optimal_nu(y,a1,a2)
        h=1e-5*nu
        up=weighted_funcs.solve_weighted(y,a1,a2,nu+h).unweighted_cost_plus
        down=weighted_funcs.solve_weighted(y,a1,a2,nu-h).unweighted_cost_plus
        cost=weighted_funcs.solve_weighted(y,a1,a2,nu).unweighted_cost_plus
        assert abs(up-down)/(2*h)<1e-6*cost/nu


def test_batch_matches_scalar(local_batch,rng):
    Y,a1,a2=local_batch(rng,50)
    eps,nu,bad=weighted_funcs.triangulate_weighted_batch(Y,a1,a2)
    assert not bad.any()
    for k,y in enumerate(Y):
        nk=weighted_funcs.optimal_nu(y,a1,a2)
        assert nu[k]==pytest.approx(nk,rel=1e-14)
        assert np.allclose(eps[k],weighted_funcs.solve_weighted(y,a1,a2,nk).eps_plus,rtol=1e-13,atol=1e-15)


def test_degenerate_data():
    y=np.array([1.0,0.0,1.0,0.0])
    with pytest.raises(DegenerateData):
        weighted_funcs.solve_weighted(y,1.0,0.5,1.0)
    with pytest.raises(DegenerateData):
        weighted_funcs.optimal_nu(y,1.0,0.5)
    eps,nu,bad=weighted_funcs.triangulate_weighted_batch(np.vstack([y,[1.0,2.0,3.0,4.0]]),1.0,0.5)
    assert bad.tolist()==[True,False]
    assert np.isnan(eps[0]).all() and np.isfinite(eps[1]).all()


def test_invalid_parameters():
    with pytest.raises(ValueError):
        weighted_funcs.solve_weighted(np.ones(4),1.0,0.5,0.0)
    with pytest.raises(ValueError):
        weighted_funcs.quadratic_data(np.ones(4),-1.0,0.5,1.0)


def test_triangulate_weighted_in_image(calibrated_pair,rng):
    c1,c2,_,_=calibrated_pair(rng)
    f=epipolar_funcs.fundamental_from_cameras(c1,c2)
    X=np.array([0.2,-0.1,4.0])
    gt=np.concatenate([c1.project(X),c2.project(X)])
    c=correspondence.from_stacked(gt+rng.normal(scale=1e-2,size=4),gt)
    res=weighted_funcs.triangulate_weighted(f,c)
    xh=res.corrected.stacked
    assert res.method=='weighted' and res.nu>0
    k=epipolar_funcs.diagonalize(f).kernel
    assert abs(f.residual(xh))<=1e-12*(1+xh@xh)*(1+k@k)
    assert res.cost2d==pytest.approx(np.sum((xh-c.stacked)**2),rel=1e-12)
    assert res.dist_gt is not None


def test_scale_invariance(local_batch,rng):
    Y,a1,a2=local_batch(rng,20)
    for y in Y:
        nu=weighted_funcs.optimal_nu(y,a1,a2)
        assert weighted_funcs.optimal_nu(y,3.5*a1,3.5*a2)==pytest.approx(nu,rel=1e-12)
        base=weighted_funcs.solve_weighted(y,a1,a2,nu)
        scaled=weighted_funcs.solve_weighted(y,3.5*a1,3.5*a2,nu)
        assert np.allclose(scaled.eps_plus,base.eps_plus,rtol=1e-12,atol=1e-12*np.linalg.norm(y))
