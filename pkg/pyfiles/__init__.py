import pyfiles.data_models.constants
import pyfiles.data_models.errors
import pyfiles.data_models.correspondence
import pyfiles.data_models.triangulator

import pyfiles.models.epipolar.epipolar_funcs
import pyfiles.models.weighted.weighted_params
import pyfiles.models.weighted.weighted_funcs
import pyfiles.models.critical.critical_params
import pyfiles.models.critical.critical_funcs
import pyfiles.models.bounds.bounds_funcs
import pyfiles.models.baselines.baseline_funcs

import pyfiles.benchmark.oracle
import pyfiles.benchmark.scene
import pyfiles.benchmark.results
