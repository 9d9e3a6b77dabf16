"""Exception types raised by the library."""


class BogoliubovError(Exception):
    """Base class for all library errors."""


class NonConvergence(BogoliubovError, RuntimeError):
    """An adaptive rule exhausted its subdivision or refinement budget."""


class SingularEndpoint(BogoliubovError, ValueError):
    """The integrand is not finite where it was declared to be."""


class InvalidPotential(BogoliubovError, ValueError):
    pass


class NoLogAsymptote(BogoliubovError, RuntimeError):
    """The zero-energy solution does not settle onto ``A ln r + B`` outside the support."""


class DensityTooHigh(BogoliubovError, ValueError):
    """``rho * a**2 >= 1``, so the dilute parameter ``b`` is undefined."""


class FitDegenerate(BogoliubovError, ValueError):
    pass


class DomainViolation(BogoliubovError, ValueError):
    """``alpha**2 > gamma * (gamma + 1)`` beyond round-off."""


class ConstraintViolated(BogoliubovError, ValueError):
    """``rho0 + rho_gamma != rho`` for the state handed to a canonical evaluator."""


class SplitMismatch(BogoliubovError, RuntimeError):
    pass


class NegativeD(BogoliubovError, ValueError):
    pass


class PositiveMu(BogoliubovError, ValueError):
    pass


class LogDomain(BogoliubovError, ValueError):
    pass


class ConfigError(BogoliubovError, ValueError):
    pass
