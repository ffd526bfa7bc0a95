## @package critical_params
#  The package containing the lmfit parameters of the three weight cases.

import lmfit
import numpy as np

import pyfiles.data_models.constants as constants
from pyfiles.models.critical.critical_funcs import weight_vector

## @var solver_dict_in
#  constants.solver_dict instance \n
#  Instance of the constants.solver_dict class using all default values
solver_dict_in=constants.solver_dict()

## The class containing the parameters of a weight case.
#  Free parameters are drawn inside their [min, max] ranges; the structured weights
#  follow from lmfit expressions, so a draw always lies in the requested case.
class weight_case:

    ## Define the constructor of the weight_case class.
    #  @param self
    #  object pointer
    #  @param case
    #  str \n
    #  Can be equal to :
    #  - CaseI : \f$\lambda=(\mu a_1,\nu a_1,\mu a_2,\nu a_2)\f$
    #  - CaseII : \f$(\lambda_1,\lambda_3)=\mu(a_1,a_2)\f$, \f$\lambda_2,\lambda_4\f$ free
    #  - CaseIII : all \f$\lambda_i\f$ free
    #  @param solver_dict_in (optional)
    #  constants.solver_dict instance
    def __init__(self,case,solver_dict_in=solver_dict_in):
        if case not in ('CaseI','CaseII','CaseIII'):
            raise ValueError('Invalid weight case '+repr(case))
        self.case=case
        self.params_vals=solver_dict_in.params_vals()['weights']
        self.a=self.params_vals['a']
        self.mu=self.params_vals['mu']
        self.nu=self.params_vals['nu']
        self.lam=self.params_vals['lambda']

    ## Define the parameters to be assumed.
    #  @param self
    #  object pointer
    #  @returns
    #  lmfit.Parameters instance
    def params(self):
        params=lmfit.Parameters()
        params.add_many(('a1',self.a[0],True,self.a[1],self.a[2]),
                        ('a2',self.a[0],True,self.a[1],self.a[2]),
                        ('mu',self.mu[0],True,self.mu[1],self.mu[2]))
        if self.case=='CaseIII':
            for name in ('lam1','lam3'):
                params.add(name=name,value=self.lam[0],vary=True,min=self.lam[1],max=self.lam[2])
        else:
            params.add(name='lam1',expr='mu*a1')
            params.add(name='lam3',expr='mu*a2')
        if self.case=='CaseI':
            params.add(name='nu',value=self.nu[0],vary=True,min=self.nu[1],max=self.nu[2])
            params.add(name='lam2',expr='nu*a1')
            params.add(name='lam4',expr='nu*a2')
        else:
            params.add(name='lam2',value=self.lam[0],vary=True,min=self.lam[1],max=self.lam[2])
            params.add(name='lam4',value=self.lam[0],vary=True,min=self.lam[1],max=self.lam[2])
        return params

    ## Draw a random instance of the case.
    #  @param self
    #  object pointer
    #  @param rng
    #  numpy.random.Generator instance
    #  @returns
    #  tuple \n
    #  (a1, a2, weight_vector instance)
    def sample(self,rng):
        params=self.params()
        for name in sorted(params):
            par=params[name]
            if par.vary:
                par.set(value=rng.uniform(par.min,par.max))
        params.update_constraints()
        vals=params.valuesdict()
        lam=np.array([vals['lam1'],vals['lam2'],vals['lam3'],vals['lam4']])
        return vals['a1'],vals['a2'],weight_vector(lam)
