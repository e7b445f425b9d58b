"""Exception hierarchy shared by all tightmaps modules."""


class TightMapsError(Exception):
    """Base class for every library-specific failure."""


# --- series ring -----------------------------------------------------------

class ZeroConstantTerm(TightMapsError):
    """Inversion of a series whose constant term vanishes."""


class NotASquare(TightMapsError):
    """Square root requested of a series that has none in the ring."""


class HalfIntegerDifferentiation(TightMapsError):
    """t-derivative hit a half-integer exponent in integer-calculus mode."""


class BeyondTruncation(TightMapsError):
    """Coefficient extraction past the trusted truncation grade."""


# --- combinatorial polynomials --------------------------------------------

class InvalidRange(TightMapsError):
    """Index arguments outside the defining range of a polynomial family."""


class InsufficientOrders(TightMapsError):
    """Composition formula fed fewer derivative orders than required."""


class ParityMismatch(TightMapsError):
    """Discrete summation asked for a parity combination with no closed form."""


class OutOfRange(TightMapsError):
    """Euler characteristic requested outside the hyperbolic range."""


class InsufficientSamples(TightMapsError):
    """Quasi-polynomial fit lacks a full interpolation grid."""


class NotQuasiPolynomial(TightMapsError):
    """Sampled data contradicts quasi-polynomiality (nonzero residuals)."""


# --- disk solver -----------------------------------------------------------

class NonConvergence(TightMapsError):
    """Fixed-point sweeps failed to become stationary (grading bug)."""


class InvalidIndex(TightMapsError):
    """Trumpet coefficient with a nonpositive index."""


class IndexBeyondLmax(TightMapsError):
    """Table transform touched an index above the trumpet matrix size."""


class HalfPowerResidue(TightMapsError):
    """Half-power normalisation left exponents of the wrong parity."""


# --- closed forms ----------------------------------------------------------

class InsufficientOrder(TightMapsError):
    """Not enough cached derivatives for the requested formula."""


class AssumptionViolated(TightMapsError):
    """Strict-pants formula used outside its validity region."""


class UnsupportedCase(TightMapsError):
    """Closed form not printed for this boundary configuration."""


class NonBipartiteWeights(TightMapsError):
    """Bipartite-only formula evaluated with odd face weights active."""


class LogOfNonUnit(TightMapsError):
    """Logarithm of a series that is not t-power times a 1-unit."""


# --- boundary insertion ----------------------------------------------------

class BeyondLmax(TightMapsError):
    """Insertion operator requested past the trumpet matrix size."""


class MissingDependency(TightMapsError):
    """Recursion step needs table entries that were never computed."""


class UnsupportedGenus(TightMapsError):
    """No base case available to grow the requested table."""


# --- moments ---------------------------------------------------------------

class MomentMismatch(TightMapsError):
    """The two independent moment computations disagree."""


class SingularDifferential(TightMapsError):
    """Inverse-function differential with a non-invertible Jacobian."""


# --- census ----------------------------------------------------------------

class ScaleExceeded(TightMapsError):
    """Brute-force enumeration requested above the edge-count guard."""
