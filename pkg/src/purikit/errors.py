"""Exception types shared across the package."""


class InvalidStateError(ValueError):
    """A matrix or parameter set is not a valid two-qubit density matrix."""


class NormError(ValueError):
    """A pure-state vector is not normalized."""


class ParamRange(ValueError):
    """A named example was requested outside its admissible parameter range."""


class DegenerateNormalization(ArithmeticError):
    """The protocol success probability vanishes, so no output state exists.

    Attributes
    ----------
    normalization : float
        The offending value of ``N``.
    step : int or None
        Iteration index at which it occurred, when raised from a trajectory.
    """

    def __init__(self, normalization, step=None):
        self.normalization = float(normalization)
        self.step = step
        where = "" if step is None else f" at step {step}"
        super().__init__(
            f"normalization N={self.normalization:.3e} is below threshold{where}"
        )
