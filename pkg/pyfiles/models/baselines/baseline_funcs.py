## @package baseline_funcs
#  The package containing the reference triangulation methods. \n
#  Methods :
#  - sampson_correct : first-order correction along the constraint gradient
#  - lindstrom_niter2 : two-step iterative correction of Lindstrom (2010), "Triangulation made easy"
#  - midpoint_triangulate : midpoint of the common perpendicular of the viewing rays
#  - dlt_triangulate : linear triangulation of the measured points
#  - recover_point : linear 3D recovery of a corrected pair

import logging

import numpy as np

import pyfiles.data_models.constants as constants
from pyfiles.data_models.correspondence import triangulation_result
from pyfiles.data_models.errors import (NumericalBreakdown, ParallelRays,
                                        PointAtInfinity, ZeroGradient)

logger=logging.getLogger(__name__)

## @var standard_consts_in
#  dictionary \n
#  Dictionary containing standard tolerances.
standard_consts_in=constants.standard()


def _homog(p):
    return np.append(np.asarray(p,dtype=float),1.0)

def _result(c,xh,method,point3d=None):
    return triangulation_result(corrected=c.corrected(xh),cost2d=float(np.sum((xh-c.stacked)**2)),
                                method=method,point3d=point3d)

## Define the gradient of \f$g(x)=(x_1;1)^\top F(x_2;1)\f$ with respect to the four image coordinates.
#  @param f
#  fundamental_matrix instance
#  @param x
#  ndarray[4]
#  @returns
#  ndarray[4]
def constraint_gradient(f,x):
    h1,h2=_homog(x[:2]),_homog(x[2:])
    return np.concatenate([(f.F@h2)[:2],(f.F.T@h1)[:2]])

## Define the Sampson error \f$|g|/\|\nabla g\|\f$.
def sampson_error(f,c):
    x=c.stacked
    grad=constraint_gradient(f,x)
    ng=np.linalg.norm(grad)
    if ng<standard_consts_in['zero_gradient']*np.linalg.norm(f.F):
        raise ZeroGradient('constraint gradient vanishes at the measurement')
    return float(abs(f.residual(x))/ng)

## Correct a correspondence to first order.
#  \f[ \hat x = \tilde x - \frac{g(\tilde x)}{\|\nabla g(\tilde x)\|^2}\nabla g(\tilde x). \f]
#  @param f
#  fundamental_matrix instance
#  @param c
#  correspondence instance
#  @returns
#  triangulation_result instance
def sampson_correct(f,c):
    x=c.stacked
    grad=constraint_gradient(f,x)
    ng2=grad@grad
    if np.sqrt(ng2)<standard_consts_in['zero_gradient']*np.linalg.norm(f.F):
        raise ZeroGradient('constraint gradient vanishes at the measurement')
    xh=x-f.residual(x)/ng2*grad
    return _result(c,xh,'sampson')

## Correct a correspondence with two iterations of Lindstrom's method.
#  The first step solves the constraint exactly along the gradient at the measurement,
#  \f$a\lambda^2-2b\lambda+c=0\f$ with \f$a=n^\top F_{2\times 2}n'\f$, \f$b=(n^\top n+n'^\top n')/2\f$,
#  \f$c=g(\tilde x)\f$. The second step projects the measurement onto the tangent plane of the
#  constraint at the first estimate.
#  @param f
#  fundamental_matrix instance
#  @param c
#  correspondence instance
#  @returns
#  triangulation_result instance
def lindstrom_niter2(f,c):
    x=c.stacked
    E=f.F22
    h1,h2=_homog(x[:2]),_homog(x[2:])
    n=(f.F@h2)[:2]
    n2=(f.F.T@h1)[:2]
    a=n@E@n2
    b=0.5*(n@n+n2@n2)
    g=h1@f.F@h2
    disc=b*b-a*g
    if disc<0:
        raise NumericalBreakdown('negative discriminant in the first update')
    d=np.sqrt(disc)
    if b+d==0:
        if g==0:
            return _result(c,x.copy(),'lindstrom')
        raise NumericalBreakdown('zero denominator in the first update')
    lam=g/(b+d)
    dx,dx2=lam*n,lam*n2
    n=n-E@dx2
    n2=n2-E.T@dx
    mm=n@n+n2@n2
    if mm==0:
        raise NumericalBreakdown('zero gradient after the first update')
    lam=lam*2*d/mm
    xh=np.concatenate([x[:2]-lam*n,x[2:]-lam*n2])
    logger.debug('lindstrom: lambda=%g residual=%g',lam,f.residual(xh))
    return _result(c,xh,'lindstrom')

## Recover a 3D point linearly from a corrected pair.
#  Each view is translated so that its image point is the origin; the two rows it
#  contributes are then scaled to unit norm, which makes the solution independent of the
#  scale of either camera matrix. An isotropic rescaling of the image is not applied, as a
#  single translated point has zero mean distance.
#  @param c1
#  camera_matrix instance
#  @param c2
#  camera_matrix instance
#  @param corrected
#  correspondence instance
#  @returns
#  ndarray[3]
def recover_point(c1,c2,corrected):
    rows=[]
    for cam,pt in ((c1,corrected.x1),(c2,corrected.x2)):
        T=np.array([[1.0,0,-pt[0]],[0,1.0,-pt[1]],[0,0,1.0]])
        Pn=T@cam.entries
        rows.append(Pn[0])
        rows.append(Pn[1])
    A=np.array(rows)
    A=A/np.linalg.norm(A,axis=1,keepdims=True)
    Xh=np.linalg.svd(A)[2][-1]
    if abs(Xh[3])<standard_consts_in['point_at_infinity']*np.linalg.norm(Xh[:3]):
        raise PointAtInfinity('recovered point lies at infinity')
    return Xh[:3]/Xh[3]

## Triangulate the measured pair linearly and reproject.
#  @returns
#  triangulation_result instance with the reprojections as corrected pair
def dlt_triangulate(c1,c2,c):
    X=recover_point(c1,c2,c)
    xh=np.concatenate([c1.project(X),c2.project(X)])
    return _result(c,xh,'dlt',point3d=X)

## Triangulate with the midpoint of the common perpendicular of both viewing rays.
#  Rays are \f$c_i + t M_i^{-1}(x_i;1)\f$ where \f$M_i\f$ is the left 3x3 block of camera i.
#  @param c1
#  camera_matrix instance
#  @param c2
#  camera_matrix instance
#  @param c
#  correspondence instance
#  @returns
#  triangulation_result instance with the reprojected midpoint as corrected pair
def midpoint_triangulate(c1,c2,c):
    o1,o2=c1.center,c2.center
    d1=np.linalg.solve(c1.entries[:,:3],_homog(c.x1))
    d2=np.linalg.solve(c2.entries[:,:3],_homog(c.x2))
    d1,d2=d1/np.linalg.norm(d1),d2/np.linalg.norm(d2)
    cr=np.cross(d1,d2)
    if np.linalg.norm(cr)<standard_consts_in['parallel_rays']:
        raise ParallelRays('viewing rays are parallel')
    w=o1-o2
    b=d1@d2
    den=1-b*b
    t1=(b*(d2@w)-(d1@w))/den
    t2=((d2@w)-b*(d1@w))/den
    X=0.5*((o1+t1*d1)+(o2+t2*d2))
    xh=np.concatenate([c1.project(X),c2.project(X)])
    return _result(c,xh,'midpoint',point3d=X)
