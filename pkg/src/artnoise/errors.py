"""Exception hierarchy shared by all modules."""


class ArtnoiseError(Exception):
    """Base class for library errors."""


class FactorizationError(ArtnoiseError):
    """A matrix factorization did not converge."""


class RankDeficiencyError(ArtnoiseError, ValueError):
    """A matrix that must have full rank does not."""


class DimensionError(ArtnoiseError, ValueError):
    """Shapes of the inputs are incompatible."""


class CapacityError(ArtnoiseError):
    """Enumeration dimension exceeds the configured cap."""


class NotFoundError(ArtnoiseError):
    """No lattice point inside the requested search radius."""


class ConfigError(ArtnoiseError, ValueError):
    """Invalid experiment configuration."""


class TrialError(ArtnoiseError):
    """A Monte Carlo trial failed; carries the seed that reproduces it."""

    def __init__(self, message: str, seed: int, trial_index: int, point_index: int = 0):
        super().__init__(message, seed, trial_index, point_index)
        self.message = message
        self.seed = seed
        self.trial_index = trial_index
        self.point_index = point_index

    def __str__(self) -> str:
        return f"{self.message} (point {self.point_index}, trial {self.trial_index}, seed {self.seed})"
