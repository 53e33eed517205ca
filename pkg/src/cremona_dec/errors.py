"""Exception hierarchy.

Every library error carries an ``exit_code`` used by the command line:
1 for bad input, 2 for a mathematical failure (including "a field extension
would be needed"), 3 when a bounded search ran out of candidates.
"""


class CremonaError(Exception):
    exit_code = 2


# -- input errors ---------------------------------------------------------

class InputError(CremonaError):
    exit_code = 1


class ParseError(InputError):
    """Malformed literal. ``position`` is a 0-based offset into the text."""

    def __init__(self, message, text=None, position=None):
        self.text = text
        self.position = position
        if text is not None and position is not None:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)


class NonHomogeneous(InputError):
    pass


class BadField(InputError):
    pass


class DegreeMismatch(InputError):
    pass


class EqualPoints(InputError):
    pass


class EqualLines(InputError):
    pass


class DegenerateFrame(InputError):
    pass


class CollinearPoints(InputError):
    pass


class InvalidParameters(InputError):
    pass


class PreconditionError(InputError):
    pass


class NotOnCurve(InputError):
    pass


class PointOnCurve(InputError):
    pass


class WrongBasePointPattern(InputError):
    pass


class WrongTangency(InputError):
    pass


# -- mathematical failures ------------------------------------------------

class FieldExtensionRequired(CremonaError):
    pass


class NotASquare(FieldExtensionRequired):
    pass


class IrrationalMarkers(FieldExtensionRequired):
    pass


class NotDominant(CremonaError):
    pass


class Unsupported(CremonaError):
    pass


class SingularPoint(CremonaError):
    """Parameter recovery at a singular point; ``preimages`` lists the candidates."""

    def __init__(self, message, preimages=()):
        super().__init__(message)
        self.preimages = list(preimages)


class NotRationalCubic(CremonaError):
    pass


class DegenerateConic(CremonaError):
    pass


class CurveContracted(CremonaError):
    pass


class NotOnto(CremonaError):
    pass


class NotBirational(CremonaError):
    pass


class NotInAutConic(CremonaError):
    pass


class NoTransport(CremonaError):
    pass


class ExcludedPoint(CremonaError):
    pass


class OracleUnavailable(CremonaError):
    pass


class VerificationFailed(CremonaError):
    pass


# -- resource bounds ------------------------------------------------------

class SearchExhausted(CremonaError):
    exit_code = 3
