## @package epipolar_funcs
#  The package containing cameras, the fundamental matrix and the diagonalization of the epipolar constraint. \n
#  Conventions :
#  - image points are \f$x_1\f$ (image 1) and \f$x_2\f$ (image 2), stacked as \f$x=(x_1;x_2)\in\mathbb{R}^4\f$
#  - the epipolar constraint reads \f$(x_1;1)^\top F (x_2;1) = 0\f$
#  - \f$F\f$ is partitioned as \f$\left[\begin{smallmatrix} F_{2\times 2} & F_h \\ F_v & F_{33}\end{smallmatrix}\right]\f$

from dataclasses import dataclass

import numpy as np
import scipy.linalg

import pyfiles.data_models.constants as constants
from pyfiles.data_models.errors import (CoincidentCenters, InvalidCamera,
                                        InvalidFundamental, SingularF22)

## @var standard_consts_in
#  dictionary \n
#  Dictionary containing standard tolerances.
#  @var solver_dict_in
#  constants.solver_dict instance \n
#  Instance of the constants.solver_dict class using all default values
standard_consts_in=constants.standard()
solver_dict_in=constants.solver_dict()


def _frozen(v):
    arr=np.array(v,dtype=float)
    arr.setflags(write=False)
    return arr

## Define the cross-product matrix \f$[t]_\times\f$.
#  @param t
#  ndarray[3]
#  @returns
#  ndarray[3,3] \n
#  Matrix with \f$[t]_\times v = t \times v\f$.
def skew(t):
    t=np.asarray(t,dtype=float)
    return np.array([[0.0,-t[2],t[1]],
                     [t[2],0.0,-t[0]],
                     [-t[1],t[0],0.0]])

## The class containing a projective camera.
@dataclass(frozen=True)
class camera_matrix:

    ## @var entries
    #  ndarray[3,4] \n
    #  Camera matrix, arbitrary scale.
    #  @var calibrated
    #  bool \n
    #  True when the camera has the form \f$[R\,|\,t]\f$ with \f$R\in SO(3)\f$.
    entries: np.ndarray
    calibrated: bool=False

    def __post_init__(self):
        P=_frozen(self.entries)
        if P.shape!=(3,4):
            raise InvalidCamera('a camera is a 3x4 matrix')
        object.__setattr__(self,'entries',P)
        if np.linalg.matrix_rank(P)<3:
            raise InvalidCamera('camera matrix must have rank 3')
        if self.calibrated:
            tol=standard_consts_in['orthogonal']
            R=P[:,:3]
            if (np.abs(R.T@R-np.eye(3)).max()>tol or abs(np.linalg.det(R)-1)>tol):
                raise InvalidCamera('calibrated camera needs a rotation as left block')

    ## Define the homogeneous camera centre, the unit null vector of the camera matrix.
    @property
    def center_h(self):
        c=scipy.linalg.null_space(self.entries)[:,0]
        return c if c[np.argmax(np.abs(c))]>0 else -c

    ## Define the Euclidean camera centre.
    #  @returns
    #  ndarray[3] \n
    #  Centre \f$c\f$ with \f$C(c;1)=0\f$, or None for a camera at infinity.
    @property
    def center(self):
        M=self.entries[:,:3]
        if abs(np.linalg.det(M))<=1e-14*np.linalg.norm(M)**3:
            return None
        return -np.linalg.solve(M,self.entries[:,3])

    ## Project 3D points.
    #  @param self
    #  object pointer
    #  @param X
    #  ndarray[3] or ndarray[N,3] \n
    #  Euclidean 3D points.
    #  @returns
    #  ndarray[2] or ndarray[N,2] \n
    #  Image points.
    def project(self,X):
        X=np.asarray(X,dtype=float)
        Xh=np.concatenate([X,np.ones(X.shape[:-1]+(1,))],axis=-1)
        x=Xh@self.entries.T
        return x[...,:2]/x[...,2:3]

    ## Define the depth of 3D points in front of the camera (positive means visible).
    def depth(self,X):
        X=np.asarray(X,dtype=float)
        Xh=np.concatenate([X,np.ones(X.shape[:-1]+(1,))],axis=-1)
        M=self.entries[:,:3]
        return (Xh@self.entries[2])*np.sign(np.linalg.det(M))/np.linalg.norm(M[2])

## The class containing a rank-2 fundamental matrix and its block partition.
@dataclass(frozen=True)
class fundamental_matrix:

    ## @var F
    #  ndarray[3,3] \n
    #  Fundamental matrix, of unit Frobenius norm when normalize is True.
    #  @var normalize
    #  bool \n
    #  True if F is rescaled to unit Frobenius norm on construction.
    F: np.ndarray
    normalize: bool=True

    def __post_init__(self):
        F=np.array(self.F,dtype=float)
        if F.shape!=(3,3):
            raise InvalidFundamental('a fundamental matrix is 3x3')
        nrm=np.linalg.norm(F)
        if nrm==0 or not np.isfinite(nrm):
            raise InvalidFundamental('fundamental matrix must be finite and nonzero')
        if self.normalize:
            F=F/nrm
        if abs(np.linalg.det(F/nrm))>standard_consts_in['rank2_det']:
            raise InvalidFundamental('fundamental matrix must have rank 2')
        object.__setattr__(self,'F',_frozen(F))

    ## Define the upper-left block \f$F_{2\times 2}\f$.
    #  @param self
    #  object pointer
    #  @returns
    #  ndarray[2,2]
    @property
    def F22(self):
        return self.F[:2,:2]

    ## Define \f$F_h = (F_{13},F_{23})\f$, the column paired with \f$x_1\f$.
    #  @returns
    #  ndarray[2]
    @property
    def Fh(self):
        return self.F[:2,2]

    ## Define \f$F_v = (F_{31},F_{32})\f$, the row paired with \f$x_2\f$.
    #  @returns
    #  ndarray[2]
    @property
    def Fv(self):
        return self.F[2,:2]

    ## Define the corner entry \f$F_{33}\f$.
    @property
    def F33(self):
        return self.F[2,2]

    ## Evaluate the bilinear form \f$g(x) = (x_1;1)^\top F (x_2;1)\f$.
    #  @param self
    #  object pointer
    #  @param x
    #  ndarray[4] or ndarray[N,4] \n
    #  Stacked point pairs.
    #  @returns
    #  float or ndarray[N]
    def residual(self,x):
        x=np.asarray(x,dtype=float)
        h1=np.concatenate([x[...,:2],np.ones(x.shape[:-1]+(1,))],axis=-1)
        h2=np.concatenate([x[...,2:],np.ones(x.shape[:-1]+(1,))],axis=-1)
        return np.einsum('...i,ij,...j->...',h1,self.F,h2)

## The class containing the data of the diagonalized constraint \f$\sum_i q_i y_i^2 = 0\f$.
@dataclass(frozen=True)
class diagonalized_problem:

    ## @var a1
    #  float \n
    #  Half the largest singular value of \f$F_{2\times 2}\f$.
    #  @var a2
    #  float \n
    #  Half the smallest singular value of \f$F_{2\times 2}\f$.
    #  @var kernel
    #  ndarray[4] \n
    #  Kernel point \f$k(F)\f$, the stacked pair of epipoles.
    #  @var basis
    #  ndarray[4,4] \n
    #  Orthogonal \f$R\f$ with \f$R^\top P(F) R = \mbox{diag}(q)\f$.
    a1: float
    a2: float
    kernel: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self,'kernel',_frozen(self.kernel))
        object.__setattr__(self,'basis',_frozen(self.basis))

    ## Define the signed vector \f$q=(a_1,-a_1,a_2,-a_2)\f$.
    @property
    def q(self):
        return np.array([self.a1,-self.a1,self.a2,-self.a2])

    ## Define the epipole of image 1.
    @property
    def epipole1(self):
        return self.kernel[:2]

    ## Define the epipole of image 2.
    @property
    def epipole2(self):
        return self.kernel[2:]

## Define the fundamental matrix of a camera pair.
#  With \f$F_{\mbox{std}} = [C_2 c_1]_\times C_2 C_1^+\f$ satisfying \f$x_2^\top F_{\mbox{std}} x_1 = 0\f$,
#  the returned matrix is \f$F = F_{\mbox{std}}^\top\f$ so that \f$(x_1;1)^\top F (x_2;1)=0\f$.
#  For \f$C_1=[I\,|\,0]\f$ and \f$C_2=[R\,|\,t]\f$ this is \f$F \propto R^\top[t]_\times\f$.
#  @param c1
#  camera_matrix instance \n
#  First camera.
#  @param c2
#  camera_matrix instance \n
#  Second camera.
#  @param normalize (optional)
#  bool \n
#  True if the result is scaled to unit Frobenius norm.
#  @returns
#  fundamental_matrix instance
def fundamental_from_cameras(c1,c2,normalize=solver_dict_in.normalize_F):
    tol=standard_consts_in['coincident_centers']
    p1=c1.entries/np.linalg.norm(c1.entries)
    p2=c2.entries/np.linalg.norm(c2.entries)
    k1,k2=c1.center,c2.center
    if k1 is not None and k2 is not None:
        scale=max(1.0,np.linalg.norm(k1),np.linalg.norm(k2))
        if np.linalg.norm(k1-k2)<=tol*scale:
            raise CoincidentCenters('camera centres coincide')
    e2=p2@c1.center_h
    if np.linalg.norm(e2)<=tol:
        raise CoincidentCenters('camera centres coincide')
    Fstd=skew(e2)@p2@np.linalg.pinv(p1)
    return fundamental_matrix(Fstd.T,normalize=normalize)

## Define the symmetric matrix \f$Q(F)\f$ of the epipolar constraint.
#  \f[ Q(F) = \frac{1}{2}\left[\begin{array}{ccc} 0 & F_{2\times 2} & F_h \\
#  F_{2\times 2}^\top & 0 & F_v^\top \\ F_h^\top & F_v & 2F_{33}\end{array}\right], \f]
#  so that \f$(x;1)^\top Q(F)(x;1) = (x_1;1)^\top F (x_2;1)\f$.
#  @param f
#  fundamental_matrix instance
#  @returns
#  ndarray[5,5]
def build_Q(f):
    Q=np.zeros((5,5))
    Q[0:2,2:4]=f.F22
    Q[2:4,0:2]=f.F22.T
    Q[0:2,4]=f.Fh
    Q[4,0:2]=f.Fh
    Q[2:4,4]=f.Fv
    Q[4,2:4]=f.Fv
    Q[4,4]=2*f.F33
    return 0.5*Q

## Define \f$P(F)\f$, the top-left 4x4 block of \f$Q(F)\f$.
#  Its eigenvalues are \f$(a_1,-a_1,a_2,-a_2)\f$.
#  @param f
#  fundamental_matrix instance
#  @returns
#  ndarray[4,4]
def build_P(f):
    return build_Q(f)[:4,:4]

## Diagonalize the epipolar constraint.
#  With the singular value decomposition \f$F_{2\times 2} = U\,\mbox{diag}(\sigma_1,\sigma_2)V^\top\f$,
#  the eigenvectors of \f$P(F)\f$ are \f$(u_i;\pm v_i)/\sqrt{2}\f$ with eigenvalues
#  \f$\pm a_i = \pm\sigma_i/2\f$. The kernel point is
#  \f[ k(F) = \left(-F_{2\times 2}^{-\top}F_v^\top;\; -F_{2\times 2}^{-1}F_h\right). \f]
#  Each basis column is sign-fixed so that its first nonzero entry is positive.
#  @param f
#  fundamental_matrix instance
#  @returns
#  diagonalized_problem instance
def diagonalize(f):
    F22=f.F22
    if abs(np.linalg.det(F22))<standard_consts_in['singular_f22']*np.linalg.norm(F22)**2:
        raise SingularF22('F22 is not invertible')
    U,sig,Vt=np.linalg.svd(F22)
    V=Vt.T
    cols=[]
    for i in range(2):
        cols.append(np.concatenate([U[:,i],V[:,i]])/np.sqrt(2))
        cols.append(np.concatenate([U[:,i],-V[:,i]])/np.sqrt(2))
    R=np.stack(cols,axis=1)
    for j in range(4):
        nz=np.flatnonzero(np.abs(R[:,j])>1e-12)
        if R[nz[0],j]<0:
            R[:,j]=-R[:,j]
    k1=-np.linalg.solve(F22.T,f.Fv)
    k2=-np.linalg.solve(F22,f.Fh)
    return diagonalized_problem(a1=0.5*sig[0],a2=0.5*sig[1],kernel=np.concatenate([k1,k2]),basis=R)

## Map image coordinates to local coordinates, \f$y = R^\top(x-k(F))\f$.
#  @param d
#  diagonalized_problem instance
#  @param x
#  ndarray[4] or ndarray[N,4]
#  @returns
#  ndarray[4] or ndarray[N,4]
def to_local(d,x):
    return (np.asarray(x,dtype=float)-d.kernel)@d.basis

## Map a local residual back to an image residual, \f$\epsilon \mapsto R\epsilon\f$.
#  Exact inverse of to_local on differences.
#  @param d
#  diagonalized_problem instance
#  @param e
#  ndarray[4] or ndarray[N,4] \n
#  Local residual.
#  @returns
#  ndarray[4] or ndarray[N,4]
def from_local(d,e):
    return np.asarray(e,dtype=float)@d.basis.T

## Map a local point back to image coordinates, \f$x = Ry + k(F)\f$.
def to_image(d,y):
    return from_local(d,y)+d.kernel

## Evaluate \f$\sum_i q_i y_i^2 = a_1(y_1^2-y_2^2)+a_2(y_3^2-y_4^2)\f$.
#  @param q
#  ndarray[4] \n
#  Signed vector.
#  @param y
#  ndarray[4] or ndarray[N,4]
#  @returns
#  float or ndarray[N]
def constraint_value(q,y):
    y=np.asarray(y,dtype=float)
    return (y**2)@np.asarray(q,dtype=float)

## Build calibrated cameras realizing a prescribed \f$F_{2\times 2}\f$.
#  Chooses \f$t=(0,0,t_3)\f$ and the first two rows of \f$R\f$ from \f$F_{2\times 2}\f$,
#  completing them to orthonormal rows, so that the top-left block of \f$R^\top[t]_\times\f$
#  is \f$F_{2\times 2}\f$.
#  @param F22
#  ndarray[2,2] \n
#  Nonzero matrix.
#  @returns
#  tuple \n
#  (R, t) with R in SO(3) and t in \f$\mathbb{R}^3\f$; the second camera is \f$[R\,|\,t]\f$.
def rig_from_f22(F22):
    F22=np.asarray(F22,dtype=float)
    u=np.array([-F22[0,1],-F22[1,1]])
    v=np.array([F22[0,0],F22[1,0]])
    z=np.sqrt(complex(v@v-u@u,-2*(u@v)))
    p,r=z.real,z.imag
    t3=np.sqrt(u@u+p**2)
    if t3==0:
        raise ValueError('F22 must be nonzero')
    row0=np.array([u[0],u[1],p])/t3
    row1=np.array([v[0],v[1],r])/t3
    R=np.stack([row0,row1,np.cross(row0,row1)])
    return R,np.array([0.0,0.0,t3])

## Test the parallel-axes condition for \f$C_1=[I\,|\,0]\f$, \f$C_2=R[I\,|\,-c]\f$.
#  True when the last row of \f$R\f$ is \f$(0,0,\pm 1)\f$ or \f$c\f$ is parallel
#  to \f$(r_{31},r_{32},r_{33}\pm 1)\f$; exactly then \f$a_1=a_2\f$.
#  @param R
#  ndarray[3,3]
#  @param c
#  ndarray[3]
#  @param tol (optional)
#  float
#  @returns
#  bool
def is_parallel_axes(R,c,tol=1e-9):
    R=np.asarray(R,dtype=float)
    c=np.asarray(c,dtype=float)
    if np.abs(R[2,:2]).max()<=tol:
        return True
    for sgn in (1.0,-1.0):
        w=R[2]+np.array([0.0,0.0,sgn])
        nw=np.linalg.norm(w)
        if nw>tol and np.linalg.norm(np.cross(c,w))<=tol*nw*np.linalg.norm(c):
            return True
    return False
