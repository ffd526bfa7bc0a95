## @package triangulator
#  The package containing the general information for all triangulation methods of an image pair.

import dataclasses
import logging

import numpy as np

import pyfiles.data_models.constants as constants
from pyfiles.data_models.correspondence import method_tags
from pyfiles.data_models.errors import InputError, PointAtInfinity
import pyfiles.models.epipolar.epipolar_funcs as epipolar_funcs
import pyfiles.models.weighted.weighted_funcs as weighted_funcs
import pyfiles.models.critical.critical_funcs as critical_funcs
import pyfiles.models.bounds.bounds_funcs as bounds_funcs
import pyfiles.models.baselines.baseline_funcs as baseline_funcs

logger=logging.getLogger(__name__)

## @var solver_dict_in
#  constants.solver_dict instance \n
#  Instance of the constants.solver_dict class using all default values
solver_dict_in=constants.solver_dict()

## The class containing definitions to triangulate correspondences of one image pair.
class triangulator:

    ## Define the constructor of the triangulator class.
    #  Either both cameras or a fundamental matrix must be given.
    #  @param self
    #  object pointer
    #  @param cameras (optional)
    #  tuple \n
    #  Pair of epipolar_funcs.camera_matrix instances.
    #  @param fundamental (optional)
    #  ndarray[3,3] or epipolar_funcs.fundamental_matrix instance
    #  @param solver_dict_in (optional)
    #  constants.solver_dict instance \n
    #  Instance of the constants.solver_dict class.
    def __init__(self,cameras=None,fundamental=None,solver_dict_in=solver_dict_in):

        ## @var cameras
        #  tuple or None \n
        #  Pair of camera_matrix instances.
        #  @var fundamental
        #  epipolar_funcs.fundamental_matrix instance
        #  @var args_opts
        #  dictionary \n
        #  Instance of constants.solver_dict.args_opts
        self.solver_dict_in=solver_dict_in
        self.args_opts=self.solver_dict_in.args_opts()
        normalize=self.args_opts['fundamental']['normalize']
        self.cameras=tuple(cameras) if cameras is not None else None
        if self.cameras is not None:
            self.fundamental=epipolar_funcs.fundamental_from_cameras(*self.cameras,normalize=normalize)
        elif isinstance(fundamental,epipolar_funcs.fundamental_matrix):
            self.fundamental=fundamental
        elif fundamental is not None:
            self.fundamental=epipolar_funcs.fundamental_matrix(np.asarray(fundamental,dtype=float),normalize=normalize)
        else:
            raise InputError('a triangulator needs cameras or a fundamental matrix')
        self._diag=None

    ## Define the diagonalization of the epipolar constraint, computed once per pair.
    @property
    def diag(self):
        if self._diag is None:
            self._diag=epipolar_funcs.diagonalize(self.fundamental)
            logger.debug('diagonalized pair: a1=%g a2=%g',self._diag.a1,self._diag.a2)
        return self._diag

    ## Map a correspondence to local coordinates.
    def local(self,c):
        return epipolar_funcs.to_local(self.diag,c.stacked)

    ## Triangulate a correspondence.
    #  @param self
    #  object pointer
    #  @param c
    #  correspondence instance
    #  @param method
    #  str \n
    #  Can be equal to :
    #  - weighted
    #  - exact
    #  - sampson
    #  - lindstrom
    #  - midpoint (needs cameras)
    #  - dlt (needs cameras)
    #  @returns
    #  triangulation_result instance \n
    #  point3d holds the recovered 3D point when cameras are known.
    def triangulate(self,c,method):
        if method not in method_tags:
            raise ValueError('Invalid method '+repr(method))
        if method in ('midpoint','dlt'):
            if self.cameras is None:
                raise InputError(method+' triangulation needs cameras')
            if method=='midpoint':
                return baseline_funcs.midpoint_triangulate(*self.cameras,c)
            return baseline_funcs.dlt_triangulate(*self.cameras,c)
        if method=='weighted':
            res=weighted_funcs.triangulate_weighted(self.fundamental,c,self.diag)
        elif method=='exact':
            res=critical_funcs.triangulate_exact(self.fundamental,c,self.diag)
        elif method=='sampson':
            res=baseline_funcs.sampson_correct(self.fundamental,c)
        else:
            res=baseline_funcs.lindstrom_niter2(self.fundamental,c)
        if self.cameras is not None:
            try:
                X=baseline_funcs.recover_point(*self.cameras,res.corrected)
            except PointAtInfinity:
                logger.debug('%s: corrected pair recovers a point at infinity',method)
            else:
                res=dataclasses.replace(res,point3d=X)
        return res

    ## Compute the error bounds of a correspondence.
    #  @returns
    #  bounds_funcs.bound_values instance
    def bounds(self,c):
        d=self.diag
        return bounds_funcs.error_bounds(self.local(c),d.a1,d.a2)

    ## Classify correspondences as inliers for a radius r in pixels.
    #  @param self
    #  object pointer
    #  @param corrs
    #  list of correspondence instances
    #  @param r
    #  float
    #  @returns
    #  ndarray[N] of bool
    def inliers(self,corrs,r):
        d=self.diag
        if not corrs:
            return np.zeros(0,dtype=bool)
        Y=epipolar_funcs.to_local(d,np.stack([c.stacked for c in corrs]))
        return np.atleast_1d(bounds_funcs.inlier_by_bounds(Y,d.a1,d.a2,r))
