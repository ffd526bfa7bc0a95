## @package weighted_funcs
#  The package containing the closed-form solution of the weighted triangulation problem. \n
#  In local coordinates the problem reads
#  \f[ \min_\epsilon \sum_i \lambda_i \epsilon_i^2 \quad \mbox{s.t.} \quad \sum_i q_i(\tilde y_i+\epsilon_i)^2 = 0, \f]
#  with \f$q=(a_1,-a_1,a_2,-a_2)\f$ and \f$\lambda=(a_1,\nu a_1,a_2,\nu a_2)\f$.
#  With the shorthands \f$P=a_1\tilde y_1^2+a_2\tilde y_3^2\f$ and \f$Q=a_1\tilde y_2^2+a_2\tilde y_4^2\f$
#  the critical points solve \f$As^2+Bs+C=0\f$ with
#  \f[ A = P-\nu^2 Q, \quad B = 2\nu(P+\nu Q), \quad C = \nu^2(P-Q). \f]
#  Every function has a batch form working on arrays of shape (N,4).

import logging
from dataclasses import dataclass

import numpy as np

import pyfiles.data_models.constants as constants
from pyfiles.data_models.correspondence import triangulation_result
from pyfiles.data_models.errors import DegenerateData
import pyfiles.models.epipolar.epipolar_funcs as epipolar_funcs

logger=logging.getLogger(__name__)

## @var standard_consts_in
#  dictionary \n
#  Dictionary containing standard tolerances.
standard_consts_in=constants.standard()


## The class containing the coefficients of the weighted critical equation.
#  Fields are floats for a single point or ndarray[N] for a batch.
@dataclass(frozen=True)
class quadratic_terms:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    Delta: np.ndarray
    delta: np.ndarray
    S: np.ndarray
    T: np.ndarray
    alpha_plus: np.ndarray
    alpha_minus: np.ndarray
    nu: np.ndarray

## The class containing both critical points of the weighted problem.
#  s_plus is the minimizer; s_minus is inf when the quadratic degenerates to a linear equation.
@dataclass(frozen=True)
class weighted_solution:
    s_plus: np.ndarray
    s_minus: np.ndarray
    eps_plus: np.ndarray
    eps_minus: np.ndarray
    weighted_cost_plus: np.ndarray
    weighted_cost_minus: np.ndarray
    unweighted_cost_plus: np.ndarray
    unweighted_cost_minus: np.ndarray
    nu: np.ndarray


def _halves(Y,a1,a2):
    Y2=np.asarray(Y,dtype=float)**2
    P=a1*Y2[...,0]+a2*Y2[...,2]
    Q=a1*Y2[...,1]+a2*Y2[...,3]
    return Y2,P,Q

## Flag rows whose \f$\delta\f$ is negligible against \f$\max(a)^2\|\tilde y\|^4\f$.
def degenerate_mask(delta,Y,a1,a2):
    scale=max(a1,a2)**2*np.sum(np.asarray(Y,dtype=float)**2,axis=-1)**2
    return delta<=standard_consts_in['degenerate_delta']*scale

## Define the weight vector \f$\lambda=(a_1,\nu a_1,a_2,\nu a_2)\f$.
#  @param a1
#  float
#  @param a2
#  float
#  @param nu
#  float or ndarray[N]
#  @returns
#  ndarray[4] or ndarray[N,4]
def weights(a1,a2,nu):
    nu=np.asarray(nu,dtype=float)
    one=np.ones_like(nu)
    return np.stack([a1*one,a1*nu,a2*one,a2*nu],axis=-1)

## Compute the coefficients of the weighted critical equation for a batch of local points.
#  @param Y
#  ndarray[N,4] \n
#  Local points \f$\tilde y\f$.
#  @param a1
#  float
#  @param a2
#  float
#  @param nu
#  float or ndarray[N]
#  @returns
#  quadratic_terms instance with ndarray[N] fields
def quadratic_data_batch(Y,a1,a2,nu):
    Y2,P,Q=_halves(Y,a1,a2)
    nu=np.broadcast_to(np.asarray(nu,dtype=float),P.shape)
    delta=P*Q
    rP,rQ=np.sqrt(P),np.sqrt(Q)
    return quadratic_terms(
        A=P-nu**2*Q,
        B=2*nu*(P+nu*Q),
        C=nu**2*(P-Q),
        Delta=4*nu**2*(nu+1)**2*delta,
        delta=delta,
        S=(Y2[...,0]+Y2[...,2])*Q,
        T=(Y2[...,1]+Y2[...,3])*P,
        alpha_plus=(rP-rQ)**2,
        alpha_minus=(rP+rQ)**2,
        nu=nu)

## Compute the coefficients of the weighted critical equation.
#  @param y
#  ndarray[4] \n
#  Local point \f$\tilde y\f$.
#  @param a1
#  float
#  @param a2
#  float
#  @param nu
#  float
#  @returns
#  quadratic_terms instance with float fields
def quadratic_data(y,a1,a2,nu):
    if a1<=0 or a2<=0 or nu<=0:
        raise ValueError('a1, a2 and nu must be positive')
    qd=quadratic_data_batch(np.asarray(y,dtype=float)[None,:],a1,a2,nu)
    return quadratic_terms(**{k:float(v[0]) for k,v in vars(qd).items()})

## Map critical values \f$s\f$ to residuals \f$\epsilon_i = s q_i\tilde y_i/(\lambda_i - s q_i)\f$.
#  An infinite s gives the limit \f$\epsilon = -\tilde y\f$.
def residuals(s,Y,q,lam):
    s=np.asarray(s,dtype=float)[...,None]
    Y=np.asarray(Y,dtype=float)
    with np.errstate(invalid='ignore',divide='ignore'):
        eps=s*q*Y/(lam-s*q)
    return np.where(np.isinf(s),-Y,eps)

## Solve the weighted problem for a batch of local points.
#  The roots are taken as \f$\{q_s/A,\,C/q_s\}\f$ with \f$q_s=-(B+\mbox{sign}(B)\sqrt\Delta)/2\f$,
#  and labelled by their weighted cost. Degenerate rows hold NaN.
#  @param Y
#  ndarray[N,4]
#  @param a1
#  float
#  @param a2
#  float
#  @param nu
#  float or ndarray[N]
#  @returns
#  tuple \n
#  (weighted_solution instance, ndarray[N] bool mask of degenerate rows)
def solve_weighted_batch(Y,a1,a2,nu):
    Y=np.atleast_2d(np.asarray(Y,dtype=float))
    qd=quadratic_data_batch(Y,a1,a2,nu)
    bad=degenerate_mask(qd.delta,Y,a1,a2)
    q=np.array([a1,-a1,a2,-a2])
    lam=weights(a1,a2,qd.nu)
    with np.errstate(invalid='ignore',divide='ignore'):
        qs=-0.5*(qd.B+np.copysign(np.sqrt(qd.Delta),qd.B))
        r_stable=qd.C/qs
        linear=np.abs(qd.A)<standard_consts_in['near_zero_A']*(np.abs(qd.B)+np.abs(qd.C))
        r_other=np.where(linear,np.inf,qs/qd.A)
    e_stable=residuals(r_stable,Y,q,lam)
    e_other=residuals(r_other,Y,q,lam)
    w_stable=np.sum(lam*e_stable**2,axis=-1)
    w_other=np.sum(lam*e_other**2,axis=-1)
    swap=w_other<w_stable
    s_plus=np.where(swap,r_other,r_stable)
    s_minus=np.where(swap,r_stable,r_other)
    eps_plus=np.where(swap[:,None],e_other,e_stable)
    eps_minus=np.where(swap[:,None],e_stable,e_other)
    nan=np.where(bad,np.nan,1.0)
    sol=weighted_solution(
        s_plus=s_plus*nan,
        s_minus=s_minus*nan,
        eps_plus=eps_plus*nan[:,None],
        eps_minus=eps_minus*nan[:,None],
        weighted_cost_plus=np.sum(lam*eps_plus**2,axis=-1)*nan,
        weighted_cost_minus=np.sum(lam*eps_minus**2,axis=-1)*nan,
        unweighted_cost_plus=np.sum(eps_plus**2,axis=-1)*nan,
        unweighted_cost_minus=np.sum(eps_minus**2,axis=-1)*nan,
        nu=qd.nu)
    return sol,bad

## Solve the weighted problem \f$\lambda=(a_1,\nu a_1,a_2,\nu a_2)\f$ for one local point.
#  @param y
#  ndarray[4] \n
#  Local point \f$\tilde y\f$.
#  @param a1
#  float
#  @param a2
#  float
#  @param nu
#  float
#  @returns
#  weighted_solution instance \n
#  eps_plus is the minimizer of both the weighted and the unweighted cost among the two critical points.
def solve_weighted(y,a1,a2,nu):
    if a1<=0 or a2<=0 or nu<=0:
        raise ValueError('a1, a2 and nu must be positive')
    sol,bad=solve_weighted_batch(np.asarray(y,dtype=float)[None,:],a1,a2,nu)
    if bad[0]:
        raise DegenerateData('an epipolar half of the local point vanishes')
    out={}
    for k,v in vars(sol).items():
        out[k]=v[0] if v.ndim>1 else float(v[0])
    return weighted_solution(**out)

## Compute the optimal weight ratio \f$\nu^*=T/S\f$ for a batch of local points.
#  @returns
#  tuple \n
#  (ndarray[N] of \f$\nu^*\f$, ndarray[N] bool mask of degenerate rows)
def optimal_nu_batch(Y,a1,a2):
    Y=np.atleast_2d(np.asarray(Y,dtype=float))
    Y2,P,Q=_halves(Y,a1,a2)
    S=(Y2[:,0]+Y2[:,2])*Q
    T=(Y2[:,1]+Y2[:,3])*P
    tol=standard_consts_in['degenerate_delta']*max(a1,a2)*np.sum(Y2,axis=-1)**2
    bad=(S<=tol)|(T<=tol)
    with np.errstate(invalid='ignore',divide='ignore'):
        nu=np.where(bad,np.nan,T/S)
    return nu,bad

## Compute the weight ratio \f$\nu^*=T/S\f$ minimizing the unweighted cost of the weighted minimizer.
#  \f$S=(\tilde y_1^2+\tilde y_3^2)(a_1\tilde y_2^2+a_2\tilde y_4^2)\f$ and
#  \f$T=(\tilde y_2^2+\tilde y_4^2)(a_1\tilde y_1^2+a_2\tilde y_3^2)\f$.
def optimal_nu(y,a1,a2):
    nu,bad=optimal_nu_batch(np.asarray(y,dtype=float)[None,:],a1,a2)
    if bad[0]:
        raise DegenerateData('S or T vanishes, the optimal weight ratio is undefined')
    return float(nu[0])

## Triangulate a correspondence with the weighted method.
#  Pipeline: diagonalize, map to local coordinates, choose \f$\nu^*\f$, solve the quadratic, map back.
#  @param f
#  fundamental_matrix instance
#  @param c
#  correspondence instance
#  @param d (optional)
#  diagonalized_problem instance \n
#  Diagonalization of f, computed when None.
#  @returns
#  triangulation_result instance
def triangulate_weighted(f,c,d=None):
    if d is None:
        d=epipolar_funcs.diagonalize(f)
    x=c.stacked
    y=epipolar_funcs.to_local(d,x)
    nu=optimal_nu(y,d.a1,d.a2)
    sol=solve_weighted(y,d.a1,d.a2,nu)
    xh=x+epipolar_funcs.from_local(d,sol.eps_plus)
    logger.debug('weighted: nu=%g s=%g cost=%g',nu,sol.s_plus,sol.unweighted_cost_plus)
    return triangulation_result(corrected=c.corrected(xh),cost2d=float(np.sum((xh-x)**2)),method='weighted',nu=nu)

## Triangulate a batch of local points with the weighted method.
#  @returns
#  tuple \n
#  (ndarray[N,4] residuals \f$\epsilon^+\f$, ndarray[N] of \f$\nu^*\f$, ndarray[N] bool mask of degenerate rows)
def triangulate_weighted_batch(Y,a1,a2):
    nu,bad_nu=optimal_nu_batch(Y,a1,a2)
    sol,bad=solve_weighted_batch(Y,a1,a2,np.where(bad_nu,1.0,nu))
    bad=bad|bad_nu
    return np.where(bad[:,None],np.nan,sol.eps_plus),nu,bad
