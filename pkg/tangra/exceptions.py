class ZeroPolynomialError(Exception):
    pass


class ConstantPolynomialError(Exception):
    pass


class DegreeOutOfRangeError(Exception):
    pass


class DegenerateThetaError(Exception):
    """Raise when a conformal transform annihilates an extreme coefficient."""
    pass


class RootAtPoleError(Exception):
    pass


class ClassicalOverflowError(Exception):
    """Raise when unrenormalized Graeffe coefficients leave binary64 range."""
    pass


class EndpointVanishedError(Exception):
    pass


class PairingError(Exception):
    """Raise when real-mode roots are not closed under conjugation."""
    pass


class InvalidSolveOptions(Exception):
    pass


class RootSetMismatchError(Exception):
    pass


class PolynomialFormatError(Exception):
    def __init__(self, line_number, *args):
        self.line_number = line_number
        super().__init__(*args)

    def __str__(self):
        message = super().__str__()
        return f"line {self.line_number}: {message}"


class InvalidRunConfig(Exception):
    pass
