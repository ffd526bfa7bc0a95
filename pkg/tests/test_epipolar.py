from types import SimpleNamespace

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from pyfiles.data_models.errors import (CoincidentCenters, InvalidCamera,
                                        InvalidFundamental, SingularF22)
import pyfiles.models.epipolar.epipolar_funcs as epipolar_funcs
import pyfiles.models.bounds.bounds_funcs as bounds_funcs


def _projected(c1,c2,rng,n=50):
    X=np.column_stack([rng.uniform(-1,1,size=(n,2)),rng.uniform(3,6,size=n)])
    return np.hstack([c1.project(X),c2.project(X)])


def _rig(R,c):
    c1=epipolar_funcs.camera_matrix(np.hstack([np.eye(3),np.zeros((3,1))]),calibrated=True)
    c2=epipolar_funcs.camera_matrix(np.hstack([R,-(R@c)[:,None]]),calibrated=True)
    return epipolar_funcs.fundamental_from_cameras(c1,c2)


def test_skew_is_cross_product(rng):
    t,v=rng.normal(size=(2,3))
    assert np.allclose(epipolar_funcs.skew(t)@v,np.cross(t,v),atol=1e-14)


def test_camera_checks():
    with pytest.raises(InvalidCamera):
        epipolar_funcs.camera_matrix(np.zeros((3,4)))
    with pytest.raises(InvalidCamera):
        epipolar_funcs.camera_matrix(np.ones((3,3)))
    with pytest.raises(InvalidCamera):
        epipolar_funcs.camera_matrix(np.hstack([2*np.eye(3),np.zeros((3,1))]),calibrated=True)


def test_camera_center_and_depth(calibrated_pair,rng):
    _,c2,R,c=calibrated_pair(rng)
    assert np.allclose(c2.center,c,atol=1e-12)
    assert np.allclose(c2.entries@c2.center_h,0,atol=1e-12)
    X=c+R.T@np.array([0.1,-0.2,4.0])
    assert c2.depth(X)==pytest.approx(4.0,rel=1e-12)


def test_fundamental_from_cameras_satisfies_constraint(calibrated_pair,rng):
    for _ in range(20):
        c1,c2,_,_=calibrated_pair(rng)
        f=epipolar_funcs.fundamental_from_cameras(c1,c2)
        assert np.linalg.norm(f.F)==pytest.approx(1.0,rel=1e-12)
        x=_projected(c1,c2,rng)
        scale=np.sqrt((1+np.sum(x[:,:2]**2,axis=1))*(1+np.sum(x[:,2:]**2,axis=1)))
        assert np.all(np.abs(f.residual(x))<=1e-10*scale)


def test_fundamental_checks():
    with pytest.raises(InvalidFundamental):
        epipolar_funcs.fundamental_matrix(np.eye(3))
    with pytest.raises(InvalidFundamental):
        epipolar_funcs.fundamental_matrix(np.zeros((3,3)))
    with pytest.raises(InvalidFundamental):
        epipolar_funcs.fundamental_matrix(np.eye(2))
    f=epipolar_funcs.fundamental_matrix(2*np.diag([1.0,0.5,0.0]),normalize=False)
    assert f.F[0,0]==2.0


def test_coincident_centers():
    c1=epipolar_funcs.camera_matrix(np.hstack([np.eye(3),np.zeros((3,1))]))
    R=Rotation.from_rotvec([0.1,0.2,0.3]).as_matrix()
    c2=epipolar_funcs.camera_matrix(np.hstack([R,np.zeros((3,1))]))
    with pytest.raises(CoincidentCenters):
        epipolar_funcs.fundamental_from_cameras(c1,c2)


def test_quadric_matches_residual(calibrated_pair,rng):
    c1,c2,_,_=calibrated_pair(rng)
    f=epipolar_funcs.fundamental_from_cameras(c1,c2)
    Q=epipolar_funcs.build_Q(f)
    assert np.allclose(Q,Q.T)
    for x in rng.normal(size=(10,4)):
        xh=np.append(x,1.0)
        assert xh@Q@xh==pytest.approx(f.residual(x),abs=1e-12)


def test_quadric_determinant(calibrated_pair,rng):
    # build_Q only reads the blocks, so a full-rank matrix exercises the identity
    for _ in range(200):
        F=rng.normal(size=(3,3))
        blocks=SimpleNamespace(F22=F[:2,:2],Fh=F[:2,2],Fv=F[2,:2],F33=F[2,2])
        want=np.linalg.det(F[:2,:2])*np.linalg.det(F)/16
        assert np.linalg.det(epipolar_funcs.build_Q(blocks))==pytest.approx(want,rel=1e-9,abs=1e-14)
    c1,c2,_,_=calibrated_pair(rng)
    f=epipolar_funcs.fundamental_from_cameras(c1,c2)
    assert abs(np.linalg.det(epipolar_funcs.build_Q(f)))<1e-12


def test_diagonalization(calibrated_pair,rng):
    for _ in range(20):
        c1,c2,_,_=calibrated_pair(rng)
        f=epipolar_funcs.fundamental_from_cameras(c1,c2)
        d=epipolar_funcs.diagonalize(f)
        R=d.basis
        assert d.a1>=d.a2>0
        assert np.allclose(R.T@R,np.eye(4),atol=1e-12)
        assert np.allclose(R.T@epipolar_funcs.build_P(f)@R,np.diag(d.q),atol=1e-12)
        assert abs(f.residual(d.kernel))<=1e-12*(1+d.kernel@d.kernel)
        x=rng.normal(scale=3.0,size=(30,4))
        y=epipolar_funcs.to_local(d,x)
        tol=1e-10*(1+np.sum((x-d.kernel)**2,axis=1))
        assert np.all(np.abs(f.residual(x)-epipolar_funcs.constraint_value(d.q,y))<=tol)
        assert np.allclose(epipolar_funcs.to_image(d,y),x,atol=1e-9*(1+np.abs(d.kernel).max()))


def test_basis_sign_convention(calibrated_pair,rng):
    c1,c2,_,_=calibrated_pair(rng)
    d=epipolar_funcs.diagonalize(epipolar_funcs.fundamental_from_cameras(c1,c2))
    for col in d.basis.T:
        nz=np.flatnonzero(np.abs(col)>1e-12)
        assert col[nz[0]]>0


def test_singular_f22():
    f=epipolar_funcs.fundamental_matrix(np.array([[1.0,0,0],[0,0,1],[0,0,0]]))
    with pytest.raises(SingularF22):
        epipolar_funcs.diagonalize(f)


def test_diagonal_example():
    f=epipolar_funcs.fundamental_matrix(np.diag([2.0,1.0,0.0]),normalize=False)
    d=epipolar_funcs.diagonalize(f)
    assert d.a1==pytest.approx(1.0)
    assert d.a2==pytest.approx(0.5)
    assert np.allclose(d.kernel,0)


def test_rig_from_f22(rng):
    for _ in range(50):
        F22=rng.normal(size=(2,2))
        R,t=epipolar_funcs.rig_from_f22(F22)
        assert np.allclose(R.T@R,np.eye(3),atol=1e-12)
        assert np.linalg.det(R)==pytest.approx(1.0,abs=1e-12)
        c1=epipolar_funcs.camera_matrix(np.hstack([np.eye(3),np.zeros((3,1))]),calibrated=True)
        c2=epipolar_funcs.camera_matrix(np.hstack([R,t[:,None]]),calibrated=True)
        got=epipolar_funcs.fundamental_from_cameras(c1,c2).F22
        got=got/np.linalg.norm(got)
        want=F22/np.linalg.norm(F22)
        assert min(np.abs(got-want).max(),np.abs(got+want).max())<1e-10


def _isotropic(f):
    M=f.F22.T@f.F22
    return np.abs(M-0.5*np.trace(M)*np.eye(2)).max()<=1e-12*np.trace(M)


def test_parallel_axes_last_row(rng):
    for _ in range(100):
        R=Rotation.from_euler('z',rng.uniform(0,2*np.pi)).as_matrix()
        if rng.random()<0.5:
            R=np.diag([1.0,-1.0,-1.0])@R
        c=rng.normal(size=3)
        assert epipolar_funcs.is_parallel_axes(R,c)
        assert _isotropic(_rig(R,c))


def test_parallel_axes_baseline_direction(rng):
    for _ in range(100):
        R=Rotation.from_rotvec(rng.normal(size=3)).as_matrix()
        sgn=rng.choice([-1.0,1.0])
        c=rng.uniform(0.5,2.0)*(R[2]+np.array([0.0,0.0,sgn]))
        assert epipolar_funcs.is_parallel_axes(R,c)
        assert _isotropic(_rig(R,c))


def test_generic_rigs_are_not_parallel(rng):
    for _ in range(1000):
        R=Rotation.from_rotvec(rng.normal(size=3)).as_matrix()
        c=rng.normal(size=3)
        assert not epipolar_funcs.is_parallel_axes(R,c)
        d=epipolar_funcs.diagonalize(_rig(R,c))
        assert bounds_funcs.eigenvalue_ratio(d.a1,d.a2)>1+1e-6
