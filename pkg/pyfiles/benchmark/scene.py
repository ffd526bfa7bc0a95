## @package scene
#  The package containing the synthetic two-camera scenes. \n
#  Randomness : one numpy.random.SeedSequence per scene, spawning one child for the 3D points
#  and one child per sampled point for its pixel noise, so the noise of a point does not
#  depend on how many points are kept.

import logging

import numpy as np
from scipy.optimize import brentq
from scipy.spatial.transform import Rotation

import pyfiles.data_models.constants as constants
from pyfiles.data_models.correspondence import correspondence
from pyfiles.data_models.errors import EmptyScene, InputError, SingularF22
import pyfiles.models.epipolar.epipolar_funcs as epipolar_funcs
import pyfiles.models.bounds.bounds_funcs as bounds_funcs

logger=logging.getLogger(__name__)

## @var scene_dict_in
#  constants.scene_dict instance \n
#  Instance of the constants.scene_dict class using all default values
scene_dict_in=constants.scene_dict()

## Define the intrinsic matrix, principal point at the image centre.
#  @param cfg
#  constants.scene_dict instance
#  @returns
#  ndarray[3,3]
def intrinsics(cfg):
    c=0.5*cfg.image_size
    return np.array([[cfg.focal,0.0,c],[0.0,cfg.focal,c],[0.0,0.0,1.0]])

## Define the eigenvalue ratio of the rig \f$[I\,|\,0]\f$, \f$R[I\,|\,-c]\f$.
def rig_ratio(R,c):
    c1=epipolar_funcs.camera_matrix(np.hstack([np.eye(3),np.zeros((3,1))]),calibrated=True)
    c2=epipolar_funcs.camera_matrix(np.hstack([R,-(R@c)[:,None]]),calibrated=True)
    d=epipolar_funcs.diagonalize(epipolar_funcs.fundamental_from_cameras(c1,c2))
    return bounds_funcs.eigenvalue_ratio(d.a1,d.a2)

## Find a rotation about the y-axis giving the rig a prescribed eigenvalue ratio.
#  The ratio is 1 at angle 0 and grows without bound as \f$F_{2\times 2}\f$ becomes singular;
#  the first crossing of the target on a scan of \f$[0,\pi/2]\f$ is refined with brentq.
#  @param ratio
#  float \n
#  Target ratio, at least 1.
#  @param c
#  ndarray[3] \n
#  Second camera centre.
#  @param n_scan (optional)
#  int \n
#  Number of scan samples.
#  @returns
#  ndarray[3,3]
def rig_for_ratio(ratio,c,n_scan=2000):
    if ratio<1:
        raise InputError('an eigenvalue ratio is at least 1')
    if ratio==1:
        return np.eye(3)
    c=np.asarray(c,dtype=float)
    def gap(theta):
        try:
            return rig_ratio(Rotation.from_rotvec([0.0,theta,0.0]).as_matrix(),c)-ratio
        except SingularF22:
            return 1e12
    prev=0.0
    for theta in np.linspace(0,0.5*np.pi,n_scan)[1:]:
        if gap(theta)>=0:
            theta=brentq(gap,prev,theta,xtol=1e-14)
            logger.debug('rig with ratio %g: rotation %g rad about y',ratio,theta)
            return Rotation.from_rotvec([0.0,theta,0.0]).as_matrix()
        prev=theta
    raise InputError('eigenvalue ratio %g not reachable for this baseline'%ratio)

## Define the rotation of the second camera.
#  @param cfg
#  constants.scene_dict instance
#  @returns
#  ndarray[3,3]
def rig_rotation(cfg):
    spec=cfg.rotation_spec
    if spec=='parallel-axes':
        return Rotation.from_euler('z',cfg.roll).as_matrix()
    if isinstance(spec,dict) and 'rotvec' in spec:
        return Rotation.from_rotvec(np.asarray(spec['rotvec'],dtype=float)).as_matrix()
    if isinstance(spec,dict) and 'eigenvalue_ratio' in spec:
        return rig_for_ratio(float(spec['eigenvalue_ratio']),baseline_vector(cfg))
    raise InputError('Invalid rotation_spec '+repr(spec))

## Define the second camera centre.
def baseline_vector(cfg):
    d=np.asarray(cfg.baseline_direction,dtype=float)
    return cfg.baseline*d/np.linalg.norm(d)

## Build the camera pair \f$K[I\,|\,0]\f$, \f$KR[I\,|\,-c]\f$.
#  @param cfg
#  constants.scene_dict instance
#  @returns
#  tuple \n
#  (camera_matrix, camera_matrix)
def make_cameras(cfg):
    K=intrinsics(cfg)
    R=rig_rotation(cfg)
    c=baseline_vector(cfg)
    c1=epipolar_funcs.camera_matrix(K@np.hstack([np.eye(3),np.zeros((3,1))]))
    c2=epipolar_funcs.camera_matrix(K@np.hstack([R,-(R@c)[:,None]]))
    return c1,c2

def _visible(cam,X,size):
    x=cam.project(X)
    return (cam.depth(X)>0)&np.all((x>=0)&(x<=size),axis=1)

## Generate a synthetic scene.
#  Points are drawn uniformly in image 1 and in depth (multiples of the baseline),
#  kept when they project inside image 2 in front of the camera, and observed with
#  independent Gaussian pixel noise.
#  @param cfg (optional)
#  constants.scene_dict instance
#  @returns
#  dictionary \n
#  - 'cameras' : (camera_matrix, camera_matrix)
#  - 'correspondences' : list of correspondence instances with ground truth
#  - 'points' : ndarray[N,3] of the 3D points kept
def synth_scene(cfg=scene_dict_in):
    cams=make_cameras(cfg)
    seq=np.random.SeedSequence(cfg.seed)
    point_seq,noise_seq=seq.spawn(2)
    rng=np.random.default_rng(point_seq)
    n=cfg.n_points
    uv=rng.uniform(0,cfg.image_size,size=(n,2))
    z=rng.uniform(cfg.depth[0],cfg.depth[1],size=n)*cfg.baseline
    rays=np.linalg.solve(intrinsics(cfg),np.hstack([uv,np.ones((n,1))]).T).T
    X=rays*z[:,None]
    keep=_visible(cams[0],X,cfg.image_size)&_visible(cams[1],X,cfg.image_size)
    corrs=[]
    for i,child in enumerate(noise_seq.spawn(n)):
        if not keep[i]:
            continue
        gt=np.concatenate([cams[0].project(X[i]),cams[1].project(X[i])])
        noise=np.random.default_rng(child).normal(0.0,cfg.noise_sigma,size=4)
        corrs.append(correspondence.from_stacked(gt+noise,gt))
    if not corrs:
        raise EmptyScene('no point is visible in both views')
    logger.info('scene: %d of %d points visible in both views',len(corrs),n)
    return {'cameras':cams,'correspondences':corrs,'points':X[keep]}
