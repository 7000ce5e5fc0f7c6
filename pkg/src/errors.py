"""Exception hierarchy for grammar loading, tree operations, graph input and generation."""

from __future__ import annotations


class KreyolError(Exception):
    """Base class. `concept` names the conceptual-graph node being realized, when known."""

    def __init__(self, message: str = "", concept: str | None = None):
        super().__init__(message)
        self.concept = concept

    def __str__(self) -> str:
        message = super().__str__()
        if self.concept is not None:
            return f"{message} (concept '{self.concept}')"
        return message


# Grammar

class GrammarError(KreyolError):
    """Raised when a grammar document is unusable."""


class GrammarParseError(GrammarError):
    """Raised when a grammar document is syntactically invalid."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ValidationError(GrammarError):
    """Raised when a parsed grammar breaks one or more well-formedness rules."""

    def __init__(self, issues: list[str]):
        super().__init__("; ".join(issues))
        self.issues = list(issues)


class UnparsableEnding(GrammarError):
    """Raised when no harmony class can be read off a lemma's final syllable."""

    def __init__(self, lemma: str):
        super().__init__(f"cannot read a harmony class off '{lemma}'")
        self.lemma = lemma


class NotAPredicate(GrammarError):
    """Raised when frames are requested for an entry without valence."""

    def __init__(self, lemma: str):
        super().__init__(f"'{lemma}' has no subcategorization frames")
        self.lemma = lemma


# Tree operations

class TreeOperationError(KreyolError):
    """Contract violations of substitution, adjunction, grafting or finalization."""


class AddressInvalid(TreeOperationError):
    def __init__(self, address: tuple[int, ...], message: str | None = None):
        super().__init__(message or f"no node at address {address}")
        self.address = address


class KindMismatch(TreeOperationError):
    """Raised when an operation targets a node or tree of the wrong kind."""


class CategoryMismatch(TreeOperationError):
    """Raised when the two sides of an operation carry different categories."""


class UnfilledSlot(TreeOperationError):
    def __init__(self, address: tuple[int, ...]):
        super().__init__(f"open slot at address {address}")
        self.address = address


class FeatureClash(TreeOperationError):
    """A unification Failure turned into an error because the step had to succeed."""

    def __init__(self, failure, step=None):
        where = f" during {step.op} of {step.argument} into {step.target}" if step is not None else ""
        super().__init__(f"{failure}{where}")
        self.failure = failure
        self.step = step


class NamedTreeAbsent(TreeOperationError):
    def __init__(self, name: str):
        super().__init__(f"no tree named '{name}'")
        self.name = name


# Conceptual graphs

class GraphError(KreyolError):
    """Raised when a conceptual graph is malformed."""


class GraphParseError(GraphError):
    """Raised when a graph document cannot be read."""


class DanglingEndpoint(GraphError):
    """Raised when a relation names a node id that doesn't exist."""


class DuplicateId(GraphError):
    """Raised when two nodes share an id."""


class DisconnectedGraph(GraphError):
    def __init__(self, unreachable: list[str]):
        super().__init__(f"nodes unreachable from the root: {', '.join(unreachable)}")
        self.unreachable = list(unreachable)


# Generation

class GenerationError(KreyolError):
    """Raised when a graph cannot be verbalized with the grammar."""


class InvalidTMA(GenerationError):
    """Raised for tense/aspect combinations the predicate cannot carry."""


class AspectOnState(InvalidTMA):
    """Aspect particles only combine with process predicates."""


class NoFrameFits(GenerationError):
    """Raised when a predicate has no complete frame at all."""


class MissingActant(GenerationError):
    def __init__(self, role: str, frame: str, concept: str | None = None):
        super().__init__(f"no {role} to fill frame '{frame}'", concept)
        self.role = role
        self.frame = frame


class MissingLexeme(GenerationError):
    """Raised when no lexical entry realizes a concept key."""


class DeterminerClash(GenerationError):
    """Raised when a determination is requested for an inherently definite noun."""


class UnsupportedDetermination(GenerationError):
    """Raised for determination degrees the grammar does not combine with plural."""


class NoCircumstantTree(GenerationError):
    def __init__(self, role: str, concept: str | None = None):
        super().__init__(f"role '{role}' has no circumstant realization", concept)
        self.role = role


class NoResidualStrategy(GenerationError):
    def __init__(self, relation, concept: str | None = None):
        super().__init__(f"cannot attach relation {relation}", concept)
        self.relation = relation


class DanglingAttachment(GenerationError):
    """Raised when a hyphenated or clitic token has nothing to attach to."""
