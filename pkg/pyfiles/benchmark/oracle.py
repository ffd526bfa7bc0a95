## @package oracle
#  The package containing brute-force references for the exact and weighted solvers. \n
#  The constraint set \f$\sum_i q_i y_i^2 = 0\f$ is the cone
#  \f[ y = r\left(\frac{\cos\phi_1}{\sqrt{a_1}},\frac{\cos\phi_2}{\sqrt{a_1}},
#  \frac{\sin\phi_1}{\sqrt{a_2}},\frac{\sin\phi_2}{\sqrt{a_2}}\right),\quad r\geq 0, \f]
#  which is searched on a dense \f$(\phi_1,\phi_2)\f$ grid with \f$r\f$ in closed form,
#  then refined with lmfit.

import logging

import lmfit
import numpy as np

import pyfiles.data_models.constants as constants
import pyfiles.models.weighted.weighted_funcs as weighted_funcs
from pyfiles.models.weighted.weighted_params import nu_scan_params

logger=logging.getLogger(__name__)

## @var solver_dict_in
#  constants.solver_dict instance \n
#  Instance of the constants.solver_dict class using all default values
solver_dict_in=constants.solver_dict()

## The class containing the brute-force search of the exact triangulation error.
class oracle:

    ## Define the constructor of the oracle class.
    #  @param self
    #  object pointer
    #  @param a1
    #  float
    #  @param a2
    #  float
    #  @param solver_dict_in (optional)
    #  constants.solver_dict instance \n
    #  Provides the number of grid samples per angle.
    #  @param n_starts (optional)
    #  int \n
    #  Number of grid minima refined.
    def __init__(self,a1,a2,solver_dict_in=solver_dict_in,n_starts=4):
        self.a1=float(a1)
        self.a2=float(a2)
        self.n_grid=solver_dict_in.args_opts()['harness']['oracle_grid']
        self.n_starts=n_starts
        phi=np.linspace(0,2*np.pi,self.n_grid,endpoint=False)
        p1,p2=np.meshgrid(phi,phi,indexing='ij')
        self.phi=(p1,p2)
        self.w_grid=self.cone_direction(p1,p2)

    ## Define the cone direction \f$w(\phi_1,\phi_2)\f$.
    #  @returns
    #  ndarray[...,4]
    def cone_direction(self,phi1,phi2):
        s1,s2=np.sqrt(self.a1),np.sqrt(self.a2)
        return np.stack([np.cos(phi1)/s1,np.cos(phi2)/s1,np.sin(phi1)/s2,np.sin(phi2)/s2],axis=-1)

    ## Define the residual of a cone point from the local point.
    #  Used as the fitting residual in the lmfit.Minimizer class.
    #  @param self
    #  object pointer
    #  @param params
    #  lmfit.Parameters instance with r, phi1 and phi2
    #  @param y
    #  ndarray[4]
    #  @returns
    #  ndarray[4]
    def residual(self,params,y):
        w=self.cone_direction(params['phi1'].value,params['phi2'].value)
        return params['r'].value*w-y

    ## Search the grid, keeping the lowest local minima of the grid cost.
    #  @returns
    #  list \n
    #  Starting points (r, phi1, phi2), best first.
    def grid_search(self,y):
        W=self.w_grid
        wy=W@y
        ww=np.sum(W*W,axis=-1)
        r=np.maximum(wy,0)/ww
        cost=y@y-np.where(wy>0,wy**2/ww,0)
        local=np.ones_like(cost,dtype=bool)
        for ax in (0,1):
            for sh in (-1,1):
                local&=cost<=np.roll(cost,sh,axis=ax)
        idx=np.flatnonzero(local.ravel())
        idx=idx[np.argsort(cost.ravel()[idx])][:self.n_starts]
        p1,p2=self.phi
        return [(r.ravel()[k],p1.ravel()[k],p2.ravel()[k]) for k in idx]

    ## Fit the cone point closest to a local point.
    #  Two Minimizer passes per start, as the covariance-free pass seeds the second one.
    #  @param self
    #  object pointer
    #  @param y
    #  ndarray[4]
    #  @returns
    #  lmfit.Minimizer.minimize fit result of the best start
    def fit(self,y):
        y=np.asarray(y,dtype=float)
        best=None
        for r0,p10,p20 in self.grid_search(y):
            params=lmfit.Parameters()
            params.add_many(('r',r0,True,0.0),
                            ('phi1',p10,True),
                            ('phi2',p20,True))
            mini=lmfit.Minimizer(self.residual,params,fcn_args=(y,),nan_policy='propagate',calc_covar=False)
            out=mini.minimize('leastsq')
            mini=lmfit.Minimizer(self.residual,out.params,fcn_args=(y,),nan_policy='propagate',calc_covar=False)
            out=mini.minimize('leastsq',xtol=1e-12,ftol=1e-12)
            if best is None or out.chisqr<best.chisqr:
                best=out
        return best

    ## Define the exact triangulation error \f$E_q\f$ found by the search.
    def exact_error(self,y):
        return float(np.sqrt(self.fit(y).chisqr))

## Scan the weight ratio numerically.
#  Minimizes the unweighted cost of the weighted minimizer over \f$\nu\f$ with lmfit.
#  @param y
#  ndarray[4] \n
#  Local point.
#  @param a1
#  float
#  @param a2
#  float
#  @param start (optional)
#  float \n
#  Starting value of \f$\nu\f$.
#  @returns
#  tuple \n
#  (numerical minimizer \f$\nu\f$, closed form \f$\nu^*=T/S\f$)
def nu_scan(y,a1,a2,start=1.0):
    y=np.asarray(y,dtype=float)
    params=nu_scan_params(y,a1,a2).params(start=start)
    def res(p):
        return weighted_funcs.solve_weighted(y,a1,a2,p['nu'].value).eps_plus
    mini=lmfit.Minimizer(res,params,nan_policy='propagate',calc_covar=False)
    out=mini.minimize('leastsq')
    logger.debug('nu scan: %d evaluations',out.nfev)
    return out.params['nu'].value,out.params['nu_star'].value
