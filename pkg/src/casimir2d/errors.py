"""Exception hierarchy shared across the package.

Two broad classes matter for the CLI exit-code contract:

* :class:`ValidationError` -- bad user input (configs, parameter ranges,
  geometry that cannot be set up).  CLI exit code 2.
* :class:`NumericalDomainError` -- the requested computation is outside
  the numerical domain (kernel poles on the grid, closed-form
  divergences, diverging series).  CLI exit code 3.
"""


class CasimirError(Exception):
    """Base class for package errors."""


class ValidationError(CasimirError):
    """Invalid input: configs, parameters, or scene setup."""


class GeometryError(ValidationError):
    """Objects overlap or are not separated along the decay axis."""


class NumericalDomainError(CasimirError):
    """Evaluation outside the numerically meaningful domain."""


class ResolutionError(NumericalDomainError):
    """A kernel singularity falls within numerical reach of the grid."""


class DomainError(NumericalDomainError):
    """A closed form is evaluated too close to a documented divergence."""
