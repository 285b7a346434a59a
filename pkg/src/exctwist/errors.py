"""Exception hierarchy shared by all modules."""


class ExcTwistError(Exception):
    """Base class for every error raised by the package."""


class ConfigError(ExcTwistError, ValueError):
    pass


class ShapeError(ExcTwistError, ValueError):
    """A class or atom does not fit the configuration it is used with."""


class UnknownComponentError(ExcTwistError, KeyError):
    pass


class NotSphericalError(ExcTwistError, ValueError):
    pass


class SymbolicDegreesError(ExcTwistError, ValueError):
    """Concrete degrees are required but the atom carries symbolic ones."""


class ThickenedInputError(ExcTwistError, ValueError):
    pass


class NoPresentationError(ExcTwistError, ValueError):
    pass


class NoExtensionRuleError(ExcTwistError, ValueError):
    pass


class PreconditionError(ExcTwistError, ValueError):
    """A rewrite or peel was requested whose hypotheses do not hold."""


class MukaiHypothesisError(ExcTwistError, ValueError):
    pass


class RelaxedConfigError(ExcTwistError, ValueError):
    pass
