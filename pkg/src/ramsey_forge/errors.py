"""Exception hierarchy shared by every module.

All errors derive from :class:`ForgeError` so the CLI can map them to exit
code 2 in one place.
"""


class ForgeError(Exception):
    pass


class FormatError(ForgeError, ValueError):
    """Input text does not follow one of the documented file formats."""


class BadHeader(FormatError):
    pass


class ColorOutOfRange(FormatError):
    pass


class LengthMismatch(FormatError):
    pass


class DimensionMismatch(ForgeError, ValueError):
    pass


class ImageRejected(ForgeError, ValueError):
    """A computed image value is not a positive integer."""

    def __init__(self, coordinate, value, message=None):
        self.coordinate = coordinate
        self.value = value
        super().__init__(message or f"coordinate {coordinate}: {value}")


class NotIntegral(ImageRejected):
    def __init__(self, coordinate, value):
        super().__init__(coordinate, value, f"value {value} at coordinate {coordinate} is not integral")


class NotPositive(ImageRejected):
    def __init__(self, coordinate, value):
        super().__init__(coordinate, value, f"value {value} at coordinate {coordinate} is not positive")


class CollisionUnderDistinct(ForgeError, ValueError):
    def __init__(self, value, roles):
        self.value = value
        self.roles = roles
        super().__init__(f"value {value} realized by several roles: {roles}")


class TooManyColumns(ForgeError, ValueError):
    pass


class RangeTooSmall(ForgeError, ValueError):
    pass


class ZeroScale(ForgeError, ValueError):
    pass


class NonIntegralPolyValue(ForgeError, ValueError):
    pass


class WellDefinednessViolation(ForgeError):
    """omega is not constant on m * family."""

    def __init__(self, m, e1, e2, colors):
        self.m, self.e1, self.e2, self.colors = m, e1, e2, colors
        super().__init__(
            f"m={m}: omega({m}*{e1})={colors[0]} but omega({m}*{e2})={colors[1]}"
        )


class LiftVerificationFailed(ForgeError):
    def __init__(self, value, colors, message=None):
        self.value = value
        self.colors = colors
        super().__init__(message or f"lifted value {value} breaks monochromaticity (colors {colors})")


class PipelineIncomplete(ForgeError):
    """A search stage of the lift pipeline found nothing within its bounds."""

    def __init__(self, stage, message):
        self.stage = stage
        super().__init__(f"{stage}: {message}")
