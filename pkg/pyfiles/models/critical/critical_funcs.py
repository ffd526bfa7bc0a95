## @package critical_funcs
#  The package containing the critical equation of the general weighted problem
#  \f[ \min_\epsilon \sum_i \lambda_i \epsilon_i^2 \quad \mbox{s.t.} \quad \sum_i q_i(\tilde y_i+\epsilon_i)^2 = 0, \f]
#  and the exact solution of the unweighted problem \f$\lambda=(1,1,1,1)\f$. \n
#  The critical points are \f$\epsilon_i = s q_i\tilde y_i/(\lambda_i - s q_i)\f$ where \f$s\f$ is a root of
#  \f[ N(s) = \sum_i q_i\lambda_i^2\tilde y_i^2 \prod_{j\neq i}(\lambda_j - s q_j)^2 . \f]
#  The degree of \f$N\f$ after removing the factors it provably contains is 2, 4 or 6
#  depending on how \f$\lambda\f$ relates to \f$(a_1,a_2)\f$.

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import numpy.polynomial.polynomial as poly
import scipy.linalg

import pyfiles.data_models.constants as constants
from pyfiles.data_models.correspondence import triangulation_result
from pyfiles.data_models.errors import VanishingLead
import pyfiles.models.epipolar.epipolar_funcs as epipolar_funcs

logger=logging.getLogger(__name__)

## @var standard_consts_in
#  dictionary \n
#  Dictionary containing standard tolerances.
#  @var solver_dict_in
#  constants.solver_dict instance \n
#  Instance of the constants.solver_dict class using all default values
standard_consts_in=constants.standard()
solver_dict_in=constants.solver_dict()

## Degree class of each weight case.
degree_classes={'CaseI':'Two','CaseII':'Four','CaseIII':'Six'}


## The class containing a positive weight vector \f$\lambda\f$.
@dataclass(frozen=True)
class weight_vector:
    lam: np.ndarray

    def __post_init__(self):
        lam=np.array(self.lam,dtype=float)
        if lam.shape!=(4,) or not np.all(lam>0):
            raise ValueError('a weight vector holds four positive numbers')
        lam.setflags(write=False)
        object.__setattr__(self,'lam',lam)

## The class containing a deflated critical polynomial.
@dataclass(frozen=True)
class critical_polynomial:

    ## @var coeffs
    #  ndarray \n
    #  Coefficients in ascending degree.
    #  @var degree_class
    #  str \n
    #  'Two', 'Four' or 'Six'.
    #  @var deflated_factors
    #  tuple \n
    #  Indices i of the factors \f$(\lambda_i - s q_i)\f$ divided out.
    coeffs: np.ndarray
    degree_class: str
    deflated_factors: Tuple[int, ...]=()

    @property
    def degree(self):
        return len(self.coeffs)-1

## The class containing one real critical point.
@dataclass(frozen=True)
class critical_point:
    s: float
    eps: np.ndarray
    weighted_cost: float
    unweighted_cost: float


def _proportional(l_a,l_b,a1,a2,tol):
    return abs(l_a*a2-l_b*a1)<=tol*(l_a*a2+l_b*a1)

## Classify a weight vector.
#  @param a1
#  float
#  @param a2
#  float
#  @param lam
#  weight_vector instance
#  @param tol (optional)
#  float \n
#  Proportionality tolerance.
#  @returns
#  str \n
#  Can be equal to :
#  - 'CaseI' : \f$\lambda=(\mu a_1,\nu a_1,\mu a_2,\nu a_2)\f$
#  - 'CaseII' : exactly one of \f$(\lambda_1,\lambda_3)\f$, \f$(\lambda_2,\lambda_4)\f$ is proportional to \f$(a_1,a_2)\f$
#  - 'CaseIII' : otherwise
def classify_weights(a1,a2,lam,tol=solver_dict_in.classify_tol):
    l=lam.lam
    odd=_proportional(l[0],l[2],a1,a2,tol)
    even=_proportional(l[1],l[3],a1,a2,tol)
    if odd and even:
        return 'CaseI'
    if odd or even:
        return 'CaseII'
    return 'CaseIII'

## Define the factors \f$(\lambda_i - s q_i)\f$ that divide the numerator for a weight case.
def deflation_factors(a1,a2,lam,tol=solver_dict_in.classify_tol):
    l=lam.lam
    out=[]
    if _proportional(l[0],l[2],a1,a2,tol):
        out+=[0,2]
    if _proportional(l[1],l[3],a1,a2,tol):
        out+=[1,3]
    return tuple(out)

## Define the polynomials \f$\prod_{j\neq i}(\lambda_j - s q_j)^2\f$, ascending coefficients.
#  @returns
#  ndarray[4,7]
def product_basis(q,lam):
    sq=[poly.polypow([lam[j],-q[j]],2) for j in range(4)]
    out=np.zeros((4,7))
    for i in range(4):
        p=np.array([1.0])
        for j in range(4):
            if j!=i:
                p=poly.polymul(p,sq[j])
        out[i,:len(p)]=p
    return out

## Define the undeflated numerator \f$N(s)\f$, ascending coefficients of length 7.
def numerator(y,a1,a2,lam):
    q=np.array([a1,-a1,a2,-a2])
    l=lam.lam
    w=q*l**2*np.asarray(y,dtype=float)**2
    return w@product_basis(q,l)

## Build the deflated critical polynomial.
#  The numerator is assembled by convolution of its linear factors and divided by every
#  factor \f$(\lambda_i - s q_i)\f$ that the weight case guarantees.
#  @param y
#  ndarray[4] \n
#  Local point \f$\tilde y\f$.
#  @param a1
#  float
#  @param a2
#  float
#  @param lam
#  weight_vector instance
#  @param tol (optional)
#  float \n
#  Classification tolerance.
#  @param trim (optional)
#  bool \n
#  If True, vanishing leading coefficients are dropped instead of raising VanishingLead.
#  @returns
#  critical_polynomial instance
def build_critical_polynomial(y,a1,a2,lam,tol=solver_dict_in.classify_tol,trim=False):
    case=classify_weights(a1,a2,lam,tol)
    q=np.array([a1,-a1,a2,-a2])
    c=numerator(y,a1,a2,lam)
    scale=np.abs(c).max()
    factors=deflation_factors(a1,a2,lam,tol)
    for i in factors:
        c,rem=poly.polydiv(c,[lam.lam[i],-q[i]])
        if scale>0 and abs(rem[0])>1e-10*scale:
            logger.debug('deflation by factor %d leaves remainder %g',i,rem[0])
    c=np.array(c,dtype=float)
    full=len(c)
    lead_tol=standard_consts_in['vanishing_lead']*np.abs(c).max()
    while len(c)>1 and abs(c[-1])<=lead_tol:
        if not trim:
            raise VanishingLead('leading coefficient %g of the critical polynomial vanishes'%c[-1])
        c=c[:-1]
    if len(c)<full:
        logger.debug('critical polynomial trimmed from degree %d to %d',full-1,len(c)-1)
    return critical_polynomial(coeffs=c,degree_class=degree_classes[case],deflated_factors=factors)

## Find the roots of a polynomial.
#  Closed form up to degree 2, balanced companion-matrix eigenvalues otherwise.
#  @param c
#  ndarray \n
#  Coefficients in ascending degree with nonzero leading coefficient.
#  @returns
#  ndarray of complex roots
def polynomial_roots(c):
    c=np.asarray(c,dtype=float)
    deg=len(c)-1
    if deg<1:
        return np.zeros(0,dtype=complex)
    if deg==1:
        return np.array([-c[0]/c[1]],dtype=complex)
    if deg==2:
        C,B,A=c
        disc=complex(B*B-4*A*C)
        sq=np.sqrt(disc)
        if (np.conj(B)*sq).real<0:
            sq=-sq
        qs=-0.5*(B+sq)
        if qs==0:
            return np.zeros(2,dtype=complex)
        return np.array([qs/A,C/qs])
    return scipy.linalg.eigvals(poly.polycompanion(c))

## Keep the real roots and polish them with Newton steps.
def polish_real_roots(c,roots,steps=solver_dict_in.polish_steps):
    tol=standard_consts_in['imag_root']
    real=np.sort(roots[np.abs(roots.imag)<=tol*(1+np.abs(roots.real))].real)
    dc=poly.polyder(c)
    for _ in range(steps):
        d=poly.polyval(real,dc)
        ok=d!=0
        real[ok]=real[ok]-poly.polyval(real[ok],c)/d[ok]
    return real

## Find all real critical points of the weighted problem.
#  @param p
#  critical_polynomial instance
#  @param y
#  ndarray[4] \n
#  Local point \f$\tilde y\f$.
#  @param a1
#  float
#  @param a2
#  float
#  @param lam
#  weight_vector instance
#  @returns
#  list \n
#  List of critical_point instances, sorted by s. Roots colliding with a pole \f$\lambda_i = s q_i\f$ are dropped.
def real_critical_points(p,y,a1,a2,lam):
    y=np.asarray(y,dtype=float)
    q=np.array([a1,-a1,a2,-a2])
    l=lam.lam
    out=[]
    for s in polish_real_roots(p.coeffs,polynomial_roots(p.coeffs)):
        den=l-s*q
        if np.any(np.abs(den)<standard_consts_in['pole']*l):
            continue
        eps=s*q*y/den
        out.append(critical_point(s=float(s),eps=eps,weighted_cost=float(np.sum(l*eps**2)),
                                  unweighted_cost=float(np.sum(eps**2))))
    return out

def _select(points):
    best=min(p.unweighted_cost for p in points)
    near=[p for p in points if p.unweighted_cost<=best*(1+1e-12)]
    return min(near,key=lambda p:abs(p.s))

## Solve the unweighted problem exactly.
#  Inputs are rescaled to \f$a_1=1\f$ and \f$\|\tilde y\|=1\f$ before the polynomial is built.
#  A leading coefficient vanishing after deflation sends one critical point to infinity,
#  where the residual tends to \f$-\tilde y\f$; that limit is kept as a candidate.
#  @param y
#  ndarray[4] \n
#  Local point \f$\tilde y\f$.
#  @param a1
#  float
#  @param a2
#  float
#  @returns
#  tuple \n
#  (ndarray[4] optimal residual \f$\epsilon^*\f$, float \f$E_q = \|\epsilon^*\|\f$)
def optimal_unweighted(y,a1,a2):
    y=np.asarray(y,dtype=float)
    ny=np.linalg.norm(y)
    if ny==0:
        return np.zeros(4),0.0
    ys=y/ny
    r=a2/a1
    lam=weight_vector(np.ones(4))
    p=build_critical_polynomial(ys,1.0,r,lam,trim=True)
    points=real_critical_points(p,ys,1.0,r,lam)
    if p.degree<6-len(p.deflated_factors):
        points.append(critical_point(s=np.inf,eps=-ys,weighted_cost=1.0,unweighted_cost=1.0))
    if not points:
        raise VanishingLead('no real critical point found')
    best=_select(points)
    eps=best.eps*ny
    return eps,float(np.linalg.norm(eps))

def _horner(C,s):
    f=np.zeros_like(s)
    for k in range(C.shape[1]-1,-1,-1):
        f=f*s+C[:,k,None]
    return f

def _companion_batch(C):
    n,m=C.shape
    d=m-1
    M=np.zeros((n,d,d))
    M[:,np.arange(1,d),np.arange(d-1)]=1.0
    M[:,:,-1]=-C[:,:d]/C[:,d:]
    return M

## Solve the unweighted problem exactly for a batch of local points sharing \f$(a_1,a_2)\f$.
#  The deflated product basis is common to all rows, so every row only costs one
#  small matrix product and one companion eigenvalue problem.
#  @param Y
#  ndarray[N,4]
#  @param a1
#  float
#  @param a2
#  float
#  @returns
#  tuple \n
#  (ndarray[N,4] optimal residuals, ndarray[N] of \f$E_q\f$)
def optimal_unweighted_batch(Y,a1,a2):
    Y=np.atleast_2d(np.asarray(Y,dtype=float))
    n=len(Y)
    eps_out=np.zeros((n,4))
    ny=np.linalg.norm(Y,axis=1)
    live=ny>0
    Ys=Y[live]/ny[live,None]
    r=a2/a1
    q=np.array([1.0,-1.0,r,-r])
    lam=weight_vector(np.ones(4))
    basis=product_basis(q,lam.lam)
    factors=deflation_factors(1.0,r,lam)
    for i in factors:
        basis=np.stack([poly.polydiv(b,[1.0,-q[i]])[0] for b in basis])
    C=(Ys**2*q)@basis
    lead_bad=np.abs(C[:,-1])<=standard_consts_in['vanishing_lead']*np.abs(C).max(axis=1)
    roots=np.linalg.eigvals(_companion_batch(np.where(lead_bad[:,None],1.0,C)))
    tol=standard_consts_in['imag_root']
    real=np.abs(roots.imag)<=tol*(1+np.abs(roots.real))
    s=roots.real
    dC=C[:,1:]*np.arange(1,C.shape[1])
    for _ in range(solver_dict_in.polish_steps):
        f=_horner(C,s)
        d=_horner(dC,s)
        with np.errstate(invalid='ignore',divide='ignore'):
            s=np.where(d!=0,s-f/d,s)
    den=1.0-s[...,None]*q
    pole=np.any(np.abs(den)<standard_consts_in['pole'],axis=-1)
    with np.errstate(invalid='ignore',divide='ignore'):
        eps=s[...,None]*q*Ys[:,None,:]/den
    cost=np.where(real&~pole,np.sum(eps**2,axis=-1),np.inf)
    best=cost.min(axis=1,keepdims=True)
    near=cost<=best*(1+1e-12)
    pick=np.argmin(np.where(near,np.abs(s),np.inf),axis=1)
    sel=eps[np.arange(len(Ys)),pick]
    rows=np.flatnonzero(live)
    for k in np.flatnonzero(lead_bad|~np.isfinite(best[:,0])):
        sel[k]=optimal_unweighted(Y[rows[k]],a1,a2)[0]/ny[rows[k]]
    eps_out[live]=sel*ny[live,None]
    return eps_out,np.linalg.norm(eps_out,axis=1)

## Triangulate a correspondence exactly, minimizing \f$\|\hat x-\tilde x\|^2\f$.
#  @param f
#  fundamental_matrix instance
#  @param c
#  correspondence instance
#  @param d (optional)
#  diagonalized_problem instance \n
#  Diagonalization of f, computed when None.
#  @returns
#  triangulation_result instance
def triangulate_exact(f,c,d=None):
    if d is None:
        d=epipolar_funcs.diagonalize(f)
    x=c.stacked
    eps,_=optimal_unweighted(epipolar_funcs.to_local(d,x),d.a1,d.a2)
    xh=x+epipolar_funcs.from_local(d,eps)
    return triangulation_result(corrected=c.corrected(xh),cost2d=float(np.sum((xh-x)**2)),method='exact')
