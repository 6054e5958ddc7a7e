"""Exception types shared across the package."""


class CapacityError(ValueError):
    """A degree or size exceeds the configured cap."""


class NotInvertibleError(ArithmeticError):
    """A class function has no inverse under convolution."""


class DegreeExceedsSampleError(ValueError):
    """Statistic degree i is larger than the sample size m."""

    def __init__(self, degree, size):
        super().__init__(f"degree exceeds sample size: degree {degree} > m = {size}")
        self.degree = degree
        self.size = size


class PopulationParseError(ValueError):
    """Malformed population file."""

    def __init__(self, line, token, text):
        super().__init__(f"line {line}, token {token}: cannot parse {text!r} as a number")
        self.line = line
        self.token = token
        self.text = text
