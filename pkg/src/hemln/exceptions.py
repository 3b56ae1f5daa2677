"""Exception and warning types raised across the package."""


class HemlnError(Exception):
    """Base class for all errors raised by hemln."""


class FileError(HemlnError):
    """An input file could not be read."""


class ParseError(HemlnError):
    """A line in an edge-list or config file could not be parsed."""

    def __init__(self, path, lineno, content, reason="expected two node ids"):
        self.path = str(path)
        self.lineno = lineno
        self.content = content
        super().__init__(f"{path}:{lineno}: {reason}: {content!r}")


class ValidationError(HemlnError):
    """A multilayer network violates a structural invariant."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class MissingMembership(HemlnError, KeyError):
    def __init__(self, node):
        self.node = node
        super().__init__(f"node {node!r} has no community")

    def __str__(self):
        return self.args[0]


class NoInterLayer(HemlnError):
    def __init__(self, left, right):
        self.left, self.right = left, right
        super().__init__(f"no inter-layer edge set declared for ({left}, {right})")


class TooLarge(HemlnError):
    """Exhaustive enumeration bound exceeded."""


class InvalidParams(HemlnError, ValueError):
    pass


class ExpressionError(HemlnError):
    """Base class for k-community expression errors."""


class ExpressionSyntaxError(ExpressionError):
    def __init__(self, text, position, expected):
        self.text = text
        self.position = position
        self.expected = expected
        found = text[position:position + 10] or "end of input"
        super().__init__(f"at position {position}: expected {expected}, found {found!r}")


class UnknownLayer(ExpressionError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown layer {name!r}")


class DisconnectedStep(ExpressionError):
    def __init__(self, left, right):
        self.left, self.right = left, right
        super().__init__(f"layers {left!r} and {right!r} share no inter-layer edges")


class SubscriptMismatch(ExpressionError):
    pass


class NotSupported(ExpressionError):
    pass


class EmptyCBGWarning(UserWarning):
    """A composition step produced no pairs."""
