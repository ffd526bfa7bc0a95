import numpy as np
import pytest
from scipy.spatial.transform import Rotation

import pyfiles.data_models.constants as constants
import pyfiles.models.epipolar.epipolar_funcs as epipolar_funcs
import pyfiles.benchmark.scene as scene


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def calibrated_pair():
    """Return a factory building a random calibrated rig [I|0], R[I|-c]."""
    def make(rng):
        R=Rotation.from_rotvec(rng.normal(scale=0.4,size=3)).as_matrix()
        c=rng.normal(size=3)
        c1=epipolar_funcs.camera_matrix(np.hstack([np.eye(3),np.zeros((3,1))]),calibrated=True)
        c2=epipolar_funcs.camera_matrix(np.hstack([R,-(R@c)[:,None]]),calibrated=True)
        return c1,c2,R,c
    return make


@pytest.fixture
def local_batch():
    """Return a factory drawing N random local points with a1 in [0.1, 1] and a2 in [0.1, 1]."""
    def make(rng,n):
        a1,a2=rng.uniform(0.1,1.0,size=2)
        return rng.standard_normal((n,4)),float(a1),float(a2)
    return make


@pytest.fixture
def generic_scene():
    cfg=constants.scene_dict(n_points=200,rotation_spec={'rotvec':[0.0,0.3,0.0]},seed=7)
    return scene.synth_scene(cfg)


@pytest.fixture
def parallel_scene():
    cfg=constants.scene_dict(n_points=200,seed=3)
    return scene.synth_scene(cfg)
