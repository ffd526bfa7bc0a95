## @package bounds_funcs
#  The package containing the error bounds of the exact triangulation error and the inlier tests. \n
#  With \f$\alpha^+ = (\sqrt{P}-\sqrt{Q})^2\f$, \f$P=a_1\tilde y_1^2+a_2\tilde y_3^2\f$ and
#  \f$Q=a_1\tilde y_2^2+a_2\tilde y_4^2\f$ the exact error \f$E_q\f$ satisfies
#  \f[ \frac{\sqrt{\alpha^+}}{\sqrt{2\max(a_1,a_2)}} \leq E_q \leq
#  \sqrt{\frac{\alpha^+}{\delta}\frac{ST}{S+T}} \leq \frac{\sqrt{\alpha^+}}{\sqrt{2\min(a_1,a_2)}}. \f]

from dataclasses import dataclass

import numpy as np

from pyfiles.data_models.errors import DegenerateData
import pyfiles.models.weighted.weighted_funcs as weighted_funcs


## The class containing the error bounds of a local point.
#  best_upper is None (NaN in a batch) when \f$\delta\f$ is degenerate.
@dataclass(frozen=True)
class bound_values:
    best_upper: float
    lower: float
    upper: float
    ratio: float
    alpha_plus: float

## Define the eigenvalue ratio \f$\sqrt{\max(a_1,a_2)/\min(a_1,a_2)}\f$.
def eigenvalue_ratio(a1,a2):
    if a1<=0 or a2<=0:
        raise ValueError('a1 and a2 must be positive')
    return float(np.sqrt(max(a1,a2)/min(a1,a2)))

## Compute the error bounds for a batch of local points.
#  @param Y
#  ndarray[N,4]
#  @param a1
#  float
#  @param a2
#  float
#  @returns
#  bound_values instance with ndarray[N] fields
def error_bounds_batch(Y,a1,a2):
    Y=np.atleast_2d(np.asarray(Y,dtype=float))
    qd=weighted_funcs.quadratic_data_batch(Y,a1,a2,1.0)
    ra=np.sqrt(qd.alpha_plus)
    bad=weighted_funcs.degenerate_mask(qd.delta,Y,a1,a2)
    with np.errstate(invalid='ignore',divide='ignore'):
        best=np.sqrt(qd.alpha_plus/qd.delta*qd.S*qd.T/(qd.S+qd.T))
    return bound_values(
        best_upper=np.where(bad,np.nan,best),
        lower=ra/np.sqrt(2*max(a1,a2)),
        upper=ra/np.sqrt(2*min(a1,a2)),
        ratio=np.full(len(Y),eigenvalue_ratio(a1,a2)),
        alpha_plus=qd.alpha_plus)

## Compute the error bounds of a local point.
#  @param y
#  ndarray[4] \n
#  Local point \f$\tilde y\f$.
#  @param a1
#  float
#  @param a2
#  float
#  @param strict (optional)
#  bool \n
#  If True, a degenerate \f$\delta\f$ raises DegenerateData; otherwise best_upper is None.
#  @returns
#  bound_values instance
def error_bounds(y,a1,a2,strict=False):
    b=error_bounds_batch(np.asarray(y,dtype=float)[None,:],a1,a2)
    best=float(b.best_upper[0])
    if np.isnan(best):
        if strict:
            raise DegenerateData('best upper bound undefined for a vanishing epipolar half')
        best=None
    return bound_values(best_upper=best,lower=float(b.lower[0]),upper=float(b.upper[0]),
                        ratio=float(b.ratio[0]),alpha_plus=float(b.alpha_plus[0]))

## Test \f$|\sqrt\alpha-\sqrt\beta| < r\f$ without square roots.
#  Equivalent to \f$\alpha+\beta < r^2\f$ or \f$(\alpha+\beta-r^2)^2 < 4\alpha\beta\f$.
#  @param alpha
#  float or ndarray, nonnegative
#  @param beta
#  float or ndarray, nonnegative
#  @param r
#  float or ndarray, positive
#  @returns
#  bool or ndarray of bool
def inlier_check_fast(alpha,beta,r):
    alpha=np.asarray(alpha,dtype=float)
    beta=np.asarray(beta,dtype=float)
    r2=np.asarray(r,dtype=float)**2
    g=alpha+beta-r2
    out=(g<0)|(g*g<4*alpha*beta)
    return bool(out) if out.ndim==0 else out

## Classify local points as inliers when the upper bound is below r.
#  Uses \f$\alpha=P/(2\min a)\f$ and \f$\beta=Q/(2\min a)\f$, so a point passes when
#  \f$\sqrt{\alpha^+/(2\min a)} < r\f$, which guarantees \f$E_q < r\f$.
#  @param Y
#  ndarray[4] or ndarray[N,4]
#  @param a1
#  float
#  @param a2
#  float
#  @param r
#  float \n
#  Inlier radius in pixels.
#  @returns
#  bool or ndarray of bool
def inlier_by_bounds(Y,a1,a2,r):
    Y=np.asarray(Y,dtype=float)
    Y2=Y**2
    m=2*min(a1,a2)
    alpha=(a1*Y2[...,0]+a2*Y2[...,2])/m
    beta=(a1*Y2[...,1]+a2*Y2[...,3])/m
    return inlier_check_fast(alpha,beta,r)
