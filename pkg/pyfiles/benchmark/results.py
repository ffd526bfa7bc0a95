## @package results
#  The package containing the procedures to obtain benchmark results: per-correspondence
#  metrics of every method, the cost sweep over epipolar planes, the degree census of the
#  critical polynomial and the eigenvalue-ratio trend.

import logging
import time
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from uncertainties import ufloat

import pyfiles.data_models.constants as constants
from pyfiles.data_models.correspondence import write_table
from pyfiles.data_models.errors import TriangulationError, VanishingLead
from pyfiles.data_models.triangulator import triangulator
import pyfiles.models.epipolar.epipolar_funcs as epipolar_funcs
import pyfiles.models.weighted.weighted_funcs as weighted_funcs
import pyfiles.models.critical.critical_funcs as critical_funcs
import pyfiles.models.bounds.bounds_funcs as bounds_funcs
from pyfiles.models.critical.critical_params import weight_case
import pyfiles.benchmark.scene as scene

logger=logging.getLogger(__name__)

## @var solver_dict_in
#  constants.solver_dict instance \n
#  Instance of the constants.solver_dict class using all default values
#  @var metrics_cols
#  list \n
#  Columns of the metrics CSV.
#  @var ratio_bins
#  list \n
#  Bin edges of the eigenvalue-ratio histogram.
solver_dict_in=constants.solver_dict()
metrics_cols=['method','cost2d','dist_gt','lower','best_upper','upper','ratio','err']
ratio_bins=[1.0,1.01,1.1,1.5,2.0,4.0,np.inf]
## Relative slack of the bound checks.
bound_slack=1e-9

## The class containing the summary of a benchmark run.
@dataclass
class metrics_report:

    ## @var summary
    #  pandas.DataFrame \n
    #  One row per method: counts, failures, mean/median/p95 of the distance to the
    #  ground truth and of the distance to the measured points, and mean +/- standard error.
    #  @var timing
    #  dictionary \n
    #  Seconds per correspondence for every method. Never written to result files.
    #  @var ratio_hist
    #  pandas.Series \n
    #  Eigenvalue-ratio histogram over image pairs.
    #  @var violations
    #  int \n
    #  Number of correspondences violating the error bounds; 0 for a sound run.
    summary: pd.DataFrame
    timing: dict=field(default_factory=dict)
    ratio_hist: pd.Series=None
    violations: int=0

def _stats(v):
    v=np.asarray(v,dtype=float)
    v=v[np.isfinite(v)]
    if len(v)==0:
        return {'mean':np.nan,'median':np.nan,'p95':np.nan,'mean_se':''}
    se=v.std(ddof=1)/np.sqrt(len(v)) if len(v)>1 else 0.0
    return {'mean':v.mean(),'median':np.median(v),'p95':np.percentile(v,95),
            'mean_se':'{:.6g}'.format(ufloat(v.mean(),se))}

## Define the eigenvalue-ratio histogram.
#  @param ratios
#  list of float
#  @returns
#  pandas.Series of counts indexed by ratio interval
def ratio_histogram(ratios):
    cats=pd.cut(pd.Series(ratios,dtype=float),bins=ratio_bins,right=False)
    return cats.value_counts(sort=False)

## Count the correspondences violating \f$lower \leq E_q \leq best\_upper \leq upper\f$.
#  @param E
#  ndarray[N] \n
#  Exact errors.
#  @param b
#  bounds_funcs.bound_values instance with ndarray[N] fields
#  @returns
#  ndarray[N] of bool
def bound_violations(E,b):
    tol=bound_slack*np.maximum(b.upper,1e-300)
    bad=b.lower>E+tol
    has_best=np.isfinite(b.best_upper)
    bad|=has_best&(E>b.best_upper+tol)
    bad|=has_best&(b.best_upper>b.upper+tol)
    return bad

## Run every method on every correspondence of an image pair.
#  @param cameras
#  tuple of two epipolar_funcs.camera_matrix instances
#  @param matches
#  list of correspondence instances
#  @param methods
#  list of str \n
#  Method tags, see triangulator.triangulator.triangulate.
#  @param out (optional)
#  str \n
#  Path of the metrics CSV, not written when None.
#  @param solver_dict_in (optional)
#  constants.solver_dict instance
#  @returns
#  tuple \n
#  (pandas.DataFrame of the metrics CSV rows, metrics_report instance)
def run_benchmark(cameras,matches,methods,out=None,solver_dict_in=solver_dict_in):
    tri=triangulator(cameras=cameras,solver_dict_in=solver_dict_in)
    n=len(matches)
    nan=np.full(n,np.nan)
    b=bounds_funcs.bound_values(best_upper=nan,lower=nan,upper=nan,ratio=nan,alpha_plus=nan)
    violations=0
    ratio=np.nan
    try:
        d=tri.diag
        ratio=bounds_funcs.eigenvalue_ratio(d.a1,d.a2)
        if n:
            Y=epipolar_funcs.to_local(d,np.stack([c.stacked for c in matches]))
            b=bounds_funcs.error_bounds_batch(Y,d.a1,d.a2)
            _,E=critical_funcs.optimal_unweighted_batch(Y,d.a1,d.a2)
            violations=int(bound_violations(E,b).sum())
    except TriangulationError as exc:
        logger.warning('bounds unavailable: %s',exc)
    rows=[]
    timing={}
    for method in methods:
        t0=time.perf_counter()
        for i,c in enumerate(matches):
            row={'method':method,'cost2d':np.nan,'dist_gt':np.nan,'lower':b.lower[i],
                 'best_upper':b.best_upper[i],'upper':b.upper[i],'ratio':ratio,'err':''}
            try:
                res=tri.triangulate(c,method)
            except TriangulationError as exc:
                row['err']=type(exc).__name__+': '+str(exc)
            else:
                row['cost2d']=res.cost2d
                row['dist_gt']=res.dist_gt if res.dist_gt is not None else np.nan
            rows.append(row)
        timing[method]=(time.perf_counter()-t0)/max(n,1)
        logger.info('%s: %.3g s per correspondence',method,timing[method])
    df=pd.DataFrame(rows,columns=metrics_cols)
    if out is not None:
        write_table(df,out)
    report=metrics_report(summary=summarize(df),timing=timing,
                          ratio_hist=ratio_histogram([ratio] if np.isfinite(ratio) else []),
                          violations=violations)
    if violations:
        logger.error('%d correspondences violate the error bounds',violations)
    return df,report

## Summarize metrics rows per method.
#  @param df
#  pandas.DataFrame with the metrics columns
#  @returns
#  pandas.DataFrame indexed by method
def summarize(df):
    out={}
    for method,grp in df.groupby('method',sort=False):
        entry={'n':len(grp),'failures':int((grp['err']!='').sum())}
        for key,vals in (('dist_gt',grp['dist_gt']),('dist_measured',np.sqrt(grp['cost2d']))):
            for stat,v in _stats(vals).items():
                entry[key+'_'+stat]=v
        out[method]=entry
    return pd.DataFrame.from_dict(out,orient='index')

## Define the weighted cost of the nearest point of each plane to a local point.
#  Solves the 2x2 weighted normal equations of every plane at once.
#  @param U
#  ndarray[N,4,2] \n
#  Orthonormal bases of the planes in local coordinates.
#  @param y
#  ndarray[4] \n
#  Local point.
#  @param w
#  ndarray[4] \n
#  Weights of the residual components.
#  @returns
#  ndarray[N]
def _plane_costs(U,y,w):
    UW=U*w[None,:,None]
    M=np.einsum('nij,nik->njk',U,UW)
    rhs=np.einsum('nij,i->nj',UW,y)
    coef=np.linalg.solve(M,rhs[...,None])[...,0]
    r=y[None,:]-np.einsum('nij,nj->ni',U,coef)
    return np.sum(w*r*r,axis=1)

## Sweep the cost of correcting a correspondence onto each pair of epipolar lines.
#  The line in image 1 through the epipole with direction \f$(\cos\theta,\sin\theta)\f$,
#  \f$\theta\in[0,\pi)\f$, is paired with its epipolar line in image 2. For each pair the
#  unweighted cost and the weighted cost with \f$\lambda=(1,\nu^*,a_2/a_1,\nu^* a_2/a_1)\f$
#  of the nearest point of the pair are returned.
#  @param f
#  epipolar_funcs.fundamental_matrix instance
#  @param c
#  correspondence instance
#  @param n_angles (optional)
#  int
#  @returns
#  pandas.DataFrame with columns theta, unweighted, weighted
def sweep_epipolar_cost(f,c,n_angles=solver_dict_in.n_angles):
    if n_angles<2:
        raise ValueError('n_angles must be at least 2')
    d=epipolar_funcs.diagonalize(f)
    y=epipolar_funcs.to_local(d,c.stacked)
    nu=weighted_funcs.optimal_nu(y,d.a1,d.a2)
    theta=np.pi*np.arange(n_angles)/n_angles
    d1=np.stack([np.cos(theta),np.sin(theta)],axis=1)
    p=np.hstack([d.epipole1+d1,np.ones((n_angles,1))])
    l2=p@f.F
    d2=np.stack([-l2[:,1],l2[:,0]],axis=1)
    d2=d2/np.linalg.norm(d2,axis=1,keepdims=True)
    U=np.zeros((n_angles,4,2))
    U[:,:2,0]=d1
    U[:,2:,1]=d2
    U=np.einsum('ji,njk->nik',d.basis,U)
    w=weighted_funcs.weights(d.a1,d.a2,nu)/d.a1
    return pd.DataFrame({'theta':theta,
                         'unweighted':_plane_costs(U,y,np.ones(4)),
                         'weighted':_plane_costs(U,y,w)})

## Count the local minima of a periodic sampled curve; a flat bottom counts once.
def count_local_minima(values):
    v=np.asarray(values,dtype=float)
    return int(np.sum((v<np.roll(v,1))&(v<=np.roll(v,-1))))

## Run the degree census of the critical polynomial.
#  @param n_samples
#  int
#  @param case
#  str or int \n
#  Can be equal to 1, 2, 3, 'CaseI', 'CaseII' or 'CaseIII'.
#  @param seed
#  int
#  @param solver_dict_in (optional)
#  constants.solver_dict instance
#  @returns
#  pandas.DataFrame \n
#  One row per sample with the drawn weights, the degree, the expected degree,
#  the number of real roots and an ok flag.
def degree_census(n_samples,case,seed,solver_dict_in=solver_dict_in):
    names={1:'CaseI',2:'CaseII',3:'CaseIII'}
    case=names.get(case,case)
    if n_samples<1:
        raise ValueError('n_samples must be positive')
    expected={'CaseI':2,'CaseII':4,'CaseIII':6}[case]
    sampler=weight_case(case,solver_dict_in=solver_dict_in)
    rng=np.random.default_rng(seed)
    tol=solver_dict_in.args_opts()['critical']['classify_tol']
    rows=[]
    for _ in range(n_samples):
        a1,a2,lam=sampler.sample(rng)
        y=rng.standard_normal(4)
        got=critical_funcs.classify_weights(a1,a2,lam,tol)
        try:
            p=critical_funcs.build_critical_polynomial(y,a1,a2,lam,tol)
            roots=critical_funcs.polynomial_roots(p.coeffs)
            n_real=len(critical_funcs.polish_real_roots(p.coeffs,roots,steps=0))
            degree=p.degree
        except VanishingLead:
            degree,n_real=-1,0
        rows.append({'case':case,'classified':got,'a1':a1,'a2':a2,
                     'lam1':lam.lam[0],'lam2':lam.lam[1],'lam3':lam.lam[2],'lam4':lam.lam[3],
                     'degree':degree,'expected':expected,'n_real':n_real,
                     'ok':bool(degree==expected and got==case)})
    df=pd.DataFrame(rows)
    logger.info('census %s: %d/%d samples of degree %d',case,int(df['ok'].sum()),n_samples,expected)
    return df

## Compare the weighted and the exact method over rigs of increasing eigenvalue ratio.
#  @param ratios
#  list of float \n
#  Target eigenvalue ratios, each at least 1.
#  @param cfg (optional)
#  constants.scene_dict instance \n
#  Base scene; its rotation_spec is replaced per ratio.
#  @returns
#  pandas.DataFrame \n
#  One row per ratio: achieved ratio, number of correspondences, mean 2D error of both
#  methods and their quotient weighted/exact.
def ratio_trend(ratios,cfg=scene.scene_dict_in):
    rows=[]
    for r in ratios:
        opts=cfg.args_opts()
        opts['rotation_spec']={'eigenvalue_ratio':float(r)}
        sc=scene.synth_scene(constants.scene_dict(**opts))
        tri=triangulator(cameras=sc['cameras'])
        d=tri.diag
        Y=epipolar_funcs.to_local(d,np.stack([c.stacked for c in sc['correspondences']]))
        eps_w,_,bad=weighted_funcs.triangulate_weighted_batch(Y,d.a1,d.a2)
        _,E=critical_funcs.optimal_unweighted_batch(Y,d.a1,d.a2)
        Ew=np.linalg.norm(eps_w[~bad],axis=1)
        rows.append({'target':float(r),'ratio':bounds_funcs.eigenvalue_ratio(d.a1,d.a2),'n':int((~bad).sum()),
                     'weighted_mean':Ew.mean(),'exact_mean':E[~bad].mean(),
                     'mean_ratio':Ew.mean()/E[~bad].mean()})
    df=pd.DataFrame(rows)
    logger.info('ratio trend:\n%s',df.to_string(index=False))
    return df
