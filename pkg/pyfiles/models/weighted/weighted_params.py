## @package weighted_params
#  The package containing the lmfit parameters of the weighted problem.

import lmfit

import pyfiles.data_models.constants as constants

## @var solver_dict_in
#  constants.solver_dict instance \n
#  Instance of the constants.solver_dict class using all default values
solver_dict_in=constants.solver_dict()

## The class containing the parameters of a weight-ratio scan.
#  The free parameter is \f$\nu\f$; the local point and \f$a_1,a_2\f$ are fixed,
#  and \f$S\f$, \f$T\f$ and \f$\nu^* = T/S\f$ are carried as constrained expressions.
class nu_scan_params:

    ## Define the constructor of the nu_scan_params class.
    #  @param self
    #  object pointer
    #  @param y
    #  ndarray[4] \n
    #  Local point \f$\tilde y\f$.
    #  @param a1
    #  float
    #  @param a2
    #  float
    #  @param solver_dict_in (optional)
    #  constants.solver_dict instance \n
    #  Provides the [starting value, min, max] range of \f$\nu\f$.
    def __init__(self,y,a1,a2,solver_dict_in=solver_dict_in):
        self.y=[float(v) for v in y]
        self.a1=float(a1)
        self.a2=float(a2)
        self.nu=solver_dict_in.params_vals()['nu']['nu']

    ## Define the parameters to be assumed.
    #  @param self
    #  object pointer
    #  @param start (optional)
    #  float \n
    #  Starting value of \f$\nu\f$; the configured one when None.
    #  @returns
    #  lmfit.Parameters instance
    def params(self,start=None):
        params=lmfit.Parameters()
        params.add_many(('a1',self.a1,False),
                        ('a2',self.a2,False),
                        ('y1',self.y[0],False),
                        ('y2',self.y[1],False),
                        ('y3',self.y[2],False),
                        ('y4',self.y[3],False))
        params.add(name='nu',value=self.nu[0] if start is None else start,vary=True,min=self.nu[1],max=self.nu[2])
        params.add(name='S',expr='(y1**2+y3**2)*(a1*y2**2+a2*y4**2)')
        params.add(name='T',expr='(y2**2+y4**2)*(a1*y1**2+a2*y3**2)')
        params.add(name='nu_star',expr='T/S')
        return params
