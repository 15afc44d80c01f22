"""Custom exceptions for the embedding lab."""


class EmbeddingLabError(Exception):
    """Base exception for all embedding lab errors."""
    pass


class ValidationError(EmbeddingLabError):
    """Exception raised for invalid input data."""
    pass


class DomainError(EmbeddingLabError):
    """Exception raised when an argument lies outside the domain of an operation."""
    pass


class UnsupportedSpaceError(EmbeddingLabError):
    """Exception raised for norm parameter combinations that are not function norms."""
    pass


class UnsupportedCaseError(EmbeddingLabError):
    """Exception raised when an asymptotic class is outside every tabulated case."""
    pass


class PreconditionError(EmbeddingLabError):
    """Exception raised when an integrability precondition of an operation fails."""
    pass


class ResolutionError(EmbeddingLabError):
    """Exception raised when a request is finer than the grid can resolve."""
    pass


class RankError(EmbeddingLabError):
    """Exception raised for degenerate least-squares projections."""
    pass


class GridExtentError(EmbeddingLabError):
    """Exception raised when a level set reaches the edge of the grid."""
    pass


class ConvergenceError(EmbeddingLabError):
    """Exception raised when quadrature or bracketing fails to converge."""
    pass


class ConfigError(EmbeddingLabError):
    """Exception raised for configuration errors."""
    pass


class CommandError(EmbeddingLabError):
    """Exception raised for subcommand loading errors."""
    pass


class AcceptanceError(EmbeddingLabError):
    """Exception raised when a verification run fails its acceptance assertion."""
    pass
