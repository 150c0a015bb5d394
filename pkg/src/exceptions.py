class IonQubitError(Exception):
    """Base exception for the trapped-ion simulator"""
    pass

class ConfigError(IonQubitError):
    """Configuration related errors"""
    pass

class ValidationError(IonQubitError):
    """Run-config validation errors"""
    pass

class NumericalContractError(IonQubitError):
    """A numerical contract of an operation was violated"""
    pass

class InvalidDimensionError(NumericalContractError):
    """Fock-space truncation or guard band out of range"""
    pass

class ContractViolationError(NumericalContractError):
    """Operator or state does not satisfy an operation's precondition"""
    pass

class UnsupportedDetuningError(NumericalContractError):
    """Nonzero detuning passed to a builder that assumes resonance"""
    pass

class TruncationError(NumericalContractError):
    """Population reached the guard band of the truncated Fock space"""

    def __init__(self, message: str, time: float = None, tail: float = None):
        super().__init__(message)
        self.time = time
        self.tail = tail

class ImpossibleOutcomeError(NumericalContractError):
    """Requested measurement outcome has vanishing probability"""
    pass

class DegenerateParametersError(NumericalContractError):
    """Parameters make a protocol undefined"""
    pass

class AcceptanceFailure(NumericalContractError):
    """One or more acceptance criteria failed"""
    pass
