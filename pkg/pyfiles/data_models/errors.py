## @package errors
#  The package containing the exceptions raised by the solvers and the harness.


## Base class of every error raised by the package.
class TriangulationError(Exception):
    pass

## Malformed user input (files, CLI arguments). The CLI maps it to exit code 1.
class InputError(TriangulationError):
    pass

## A camera matrix violates its invariants.
class InvalidCamera(TriangulationError):
    pass

## A matrix is not a rank-2 fundamental matrix.
class InvalidFundamental(TriangulationError):
    pass

## The camera centres coincide, so no fundamental matrix exists.
class CoincidentCenters(TriangulationError):
    pass

## \f$F_{2\times 2}\f$ is not invertible, so the constraint cannot be diagonalized.
class SingularF22(TriangulationError):
    pass

## One epipolar half of the local point vanishes; the closed forms break down.
class DegenerateData(TriangulationError):
    pass

## The leading coefficient of the critical polynomial underflows after deflation.
class VanishingLead(TriangulationError):
    pass

## The epipolar constraint has a vanishing gradient at the measurement.
class ZeroGradient(TriangulationError):
    pass

## An iterative correction hit a negative discriminant or a zero denominator.
class NumericalBreakdown(TriangulationError):
    pass

## The recovered homogeneous point has a vanishing last coordinate.
class PointAtInfinity(TriangulationError):
    pass

## The two viewing rays are parallel.
class ParallelRays(TriangulationError):
    pass

## No synthetic point is visible in both views.
class EmptyScene(TriangulationError):
    pass
