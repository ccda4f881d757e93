class HardyLabError(Exception):
    def __init__(self, message):
        Exception.__init__(self, message)
        self.message = message

class DomainError(HardyLabError, ValueError):
    pass

class ValidationError(HardyLabError, ValueError):
    pass

class ParameterError(HardyLabError, ValueError):
    pass

class PreconditionError(HardyLabError, ValueError):
    pass

class RangeError(HardyLabError, ValueError):
    pass

class MultipleRootsError(HardyLabError, RuntimeError):
    def __init__(self, message, roots):
        HardyLabError.__init__(self, message)
        self.roots = roots

class AccuracyError(HardyLabError, RuntimeError):
    """Raised when an adaptive method runs out of budget before meeting its tolerance.

    Carries the best estimate that was reached and its error bound.
    """
    def __init__(self, message, estimate, error):
        HardyLabError.__init__(self, message)
        self.estimate = estimate
        self.error = error
