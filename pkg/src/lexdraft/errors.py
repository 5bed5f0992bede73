"""Exception hierarchy shared across the package.

Two broad buckets matter to the CLI: ``InputError`` covers inputs that could
not even be read or parsed (exit code 2), ``ValidationError`` covers inputs
that parsed but violate a semantic contract (exit code 1).
"""


class LexdraftError(Exception):
    """Base class for all errors raised by this package."""


class InputError(LexdraftError):
    """An input file or payload could not be read or parsed."""


class MalformedXmlError(InputError):
    pass


class UnknownElementError(InputError):
    """An XML element outside the supported vocabulary was encountered."""


class DuplicateKeyError(InputError):
    pass


class DanglingOverrideError(InputError):
    """An override references a statement key that does not exist."""


class SchemaViolationError(InputError):
    """A configuration document is missing required parts."""


class NotationSyntaxError(InputError):
    """A line of the debug rule notation could not be parsed."""


class MissingNameError(InputError):
    """A fact element has no name child."""


class TemplateParseError(InputError):
    """A template uses an element or expression outside the supported subset."""


class ConfigLoadError(InputError):
    """A config or one of the files it references could not be loaded."""


class ValidationError(LexdraftError):
    """Parsed input violates a semantic contract."""


class TheoryValidationError(ValidationError):
    """A rule-base violates a load-time invariant."""


class GuardTypeError(ValidationError):
    """A numeric comparison was applied to a non-numeric term."""


class GroundingExplosionError(ValidationError):
    """Instantiating rule variables exceeded the configured instance cap."""


class ConfigValidationError(ValidationError):
    """An interview configuration is inconsistent with its rule-base."""


class AnswerValidationError(ValidationError):
    """An interview answer has the wrong kind or an unusable value.

    ``expected_kind`` names the answer kind the step requires, so callers can
    report it back to the user.
    """

    def __init__(self, message: str, expected_kind: str | None = None):
        super().__init__(message)
        self.expected_kind = expected_kind


class MissingEntryError(ValidationError):
    """A final-mode render found no entry for a required name."""

    def __init__(self, message: str, entry_name: str):
        super().__init__(message)
        self.entry_name = entry_name


class NoProofError(LexdraftError):
    """A proof trace was requested for a conclusion that has no proof."""


class SessionStateError(LexdraftError):
    """An operation does not apply to the session in its current state."""


class StoreError(LexdraftError):
    """The session store could not read or write a record."""


class CorruptRecordError(StoreError):
    """A persisted session record could not be restored."""
