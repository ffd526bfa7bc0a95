## @package constants
#  The package containing numerical tolerances, solver options and synthetic scene configurations.

import json
import numpy as np

## The dictionary containing standard tolerances.
#  This defines the dictionary of tolerances used by every solver in the package.
#  All tolerances are relative unless stated otherwise.
#  @returns
#  dictionary \n
#  Dictionary of standard tolerances:
#  - rank2_det : \f$|\det F| \leq\f$ rank2_det for a unit-norm fundamental matrix
#  - singular_f22 : \f$|\det F_{2\times 2}| < \f$ singular_f22 \f$\|F_{2\times 2}\|^2\f$ triggers SingularF22
#  - degenerate_delta : \f$\delta \leq\f$ degenerate_delta \f$\max(a)^2\|\tilde y\|^4\f$ triggers DegenerateData
#  - near_zero_A : \f$|A| < \f$ near_zero_A \f$(|B|+|C|)\f$ reduces the quadratic to a linear equation
#  - imag_root : roots with \f$|\mbox{Im}| \leq\f$ imag_root \f$(1+|\mbox{Re}|)\f$ are taken as real
#  - pole : roots with \f$|\lambda_i - s q_i| <\f$ pole \f$\lambda_i\f$ are discarded
#  - vanishing_lead : leading coefficient below vanishing_lead \f$\max|c_i|\f$ triggers VanishingLead
#  - classify : proportionality tolerance of the weight classification
#  - coincident_centers : camera centres closer than this (absolute, scene units) are coincident
#  - parallel_rays : \f$\sin\f$ of the ray angle below which rays are parallel
#  - point_at_infinity : \f$|w| <\f$ point_at_infinity \f$\|X\|\f$ for a homogeneous 3D point
#  - zero_gradient : \f$\|\nabla g\| <\f$ zero_gradient \f$\|F\|\f$ triggers ZeroGradient
#  - orthogonal : tolerance on \f$R^\top R = I\f$ and \f$\det R = 1\f$ for calibrated cameras
def standard():
        standard_dict={
                'rank2_det':1e-9,
                'singular_f22':1e-12,
                'degenerate_delta':1e-14,
                'near_zero_A':1e-12,
                'imag_root':1e-8,
                'pole':1e-10,
                'vanishing_lead':1e-12,
                'classify':1e-9,
                'coincident_centers':1e-12,
                'parallel_rays':1e-9,
                'point_at_infinity':1e-12,
                'zero_gradient':1e-14,
                'orthogonal':1e-9
        }
        return standard_dict

## The class containing dictionaries of solver options.
class solver_dict:

        ## Define the constructor of the solver_dict class.
        #  @param self
        #  object pointer
        #  @param normalize_F (optional)
        #  bool \n
        #  True if fundamental matrices are scaled to unit Frobenius norm on construction.
        #  @param classify_tol (optional)
        #  float \n
        #  Proportionality tolerance used when classifying weight vectors.
        #  @param n_angles (optional)
        #  int \n
        #  Number of epipolar planes sampled over \f$[0,\pi)\f$ by the cost sweep.
        #  @param polish_steps (optional)
        #  int \n
        #  Number of Newton steps applied to every real root of a critical polynomial.
        #  @param oracle_grid (optional)
        #  int \n
        #  Number of samples per angle of the brute-force oracle grid.
        #  @param methods (optional)
        #  list \n
        #  Methods run by default in the benchmark. Each can be equal to :
        #  - 'weighted'
        #  - 'exact'
        #  - 'sampson'
        #  - 'lindstrom'
        #  - 'midpoint'
        #  - 'dlt'
        def __init__(self, normalize_F = True,
                        classify_tol = 1e-9,
                        n_angles = 3600,
                        polish_steps = 2,
                        oracle_grid = 400,
                        methods = ('weighted','exact','sampson','lindstrom')):

                self.normalize_F=normalize_F
                self.classify_tol=classify_tol
                self.n_angles=n_angles
                self.polish_steps=polish_steps
                self.oracle_grid=oracle_grid
                self.methods=tuple(methods)

        ## Define the solver rules.
        #  @param self
        #  object pointer
        #  @returns
        #  dictionary \n
        #  Dictionary of rules :
        #  - 'fundamental' : {'normalize' : bool}
        #  - 'critical' : {'classify_tol' : float, 'polish_steps' : int}
        #  - 'harness' : {'n_angles' : int, 'oracle_grid' : int, 'methods' : tuple}
        def args_opts(self):
                args_opts_in={
                        'fundamental':{},
                        'critical':{},
                        'harness':{}}
                args_opts_in['fundamental']['normalize']=self.normalize_F
                args_opts_in['critical']['classify_tol']=self.classify_tol
                args_opts_in['critical']['polish_steps']=self.polish_steps
                args_opts_in['harness']['n_angles']=self.n_angles
                args_opts_in['harness']['oracle_grid']=self.oracle_grid
                args_opts_in['harness']['methods']=self.methods
                return args_opts_in

        ## Define the parameter ranges used for random sampling.
        #  Ranges are lists [starting value, min, max] as used by lmfit.Parameters.
        #  @param self
        #  object pointer
        #  @returns
        #  dictionary \n
        #  - 'weights' : ranges for \f$a_1, a_2, \mu, \nu\f$ and free \f$\lambda_i\f$
        #  - 'nu' : range for the \f$\nu\f$ scan
        def params_vals(self):
                params_vals_in={'weights':{},'nu':{}}
                params_vals_in['weights']['a']=[1,0.1,1]
                params_vals_in['weights']['mu']=[1,0.1,2]
                params_vals_in['weights']['nu']=[1,0.1,2]
                params_vals_in['weights']['lambda']=[1,0.1,2]
                params_vals_in['nu']['nu']=[1,1e-6,np.inf]
                return params_vals_in

## The class containing a synthetic scene configuration.
#  Replaces the image collection of a real reconstruction by a seeded two-camera rig.
class scene_dict:

        ## Define the constructor of the scene_dict class.
        #  @param self
        #  object pointer
        #  @param n_points (optional)
        #  int \n
        #  Number of 3D points sampled before the visibility filter.
        #  @param baseline (optional)
        #  float \n
        #  Distance between the camera centres in meters.
        #  @param baseline_direction (optional)
        #  list[3] \n
        #  Direction of the second camera centre in the first camera frame.
        #  A non-zero third component keeps \f$F_{2\times 2}\f$ invertible.
        #  @param rotation_spec (optional)
        #  str or dictionary \n
        #  Can be equal to :
        #  - 'parallel-axes' : rotation about the optical axis by roll
        #  - {'rotvec' : [3 floats]} : axis-angle rotation in radians
        #  - {'eigenvalue_ratio' : float} : rotation about the y-axis chosen to reach the ratio
        #  @param roll (optional)
        #  float \n
        #  Roll angle in radians for 'parallel-axes'.
        #  @param noise_sigma (optional)
        #  float \n
        #  Standard deviation of the Gaussian pixel noise per coordinate.
        #  @param seed (optional)
        #  int \n
        #  Seed of the numpy.random.SeedSequence; fully determines the scene.
        #  @param image_size (optional)
        #  int \n
        #  Width and height of the square images in pixels.
        #  @param focal (optional)
        #  float \n
        #  Focal length in pixels. Defaults to image_size.
        #  @param depth (optional)
        #  list[2] \n
        #  Depth range, in multiples of the baseline, of the sampled points.
        def __init__(self, n_points = 500,
                        baseline = 1.0,
                        baseline_direction = (1.0, 0.5, 1.0),
                        rotation_spec = 'parallel-axes',
                        roll = 0.1,
                        noise_sigma = 1.0,
                        seed = 0,
                        image_size = 1000,
                        focal = None,
                        depth = (4.0, 10.0)):

                self.n_points=int(n_points)
                self.baseline=float(baseline)
                self.baseline_direction=tuple(float(v) for v in baseline_direction)
                self.rotation_spec=rotation_spec
                self.roll=float(roll)
                self.noise_sigma=float(noise_sigma)
                self.seed=int(seed)
                self.image_size=int(image_size)
                self.focal=float(image_size if focal is None else focal)
                self.depth=tuple(float(v) for v in depth)
                if self.noise_sigma<0:
                        raise ValueError('noise_sigma must be nonnegative')
                if self.n_points<1:
                        raise ValueError('n_points must be positive')

        ## Load a scene configuration from a JSON file.
        #  Keys are the constructor arguments; missing keys take default values.
        #  @param cls
        #  class pointer
        #  @param path
        #  str \n
        #  Path of the JSON file.
        #  @returns
        #  constants.scene_dict instance
        @classmethod
        def from_json(cls,path):
                with open(path,encoding='utf-8') as fh:
                        cfg=json.load(fh)
                return cls(**cfg)

        ## Define the scene rules.
        #  @param self
        #  object pointer
        #  @returns
        #  dictionary \n
        #  Dictionary of the scene configuration, JSON serializable.
        def args_opts(self):
                return {'n_points':self.n_points,
                        'baseline':self.baseline,
                        'baseline_direction':list(self.baseline_direction),
                        'rotation_spec':self.rotation_spec,
                        'roll':self.roll,
                        'noise_sigma':self.noise_sigma,
                        'seed':self.seed,
                        'image_size':self.image_size,
                        'focal':self.focal,
                        'depth':list(self.depth)}
