"""Exception hierarchy shared across the toolkit.

Every error carries a ``category`` used by the CLI to pick an exit code:
"usage" -> 1, "data" -> 2, "numeric" -> 3.
"""


class IrisPadError(Exception):
    category = "data"


# --- manifest ---------------------------------------------------------------

class ManifestError(IrisPadError):
    pass


class MalformedRow(ManifestError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateId(ManifestError):
    def __init__(self, sample_id: str, line_no: int):
        super().__init__(f"duplicate sample_id {sample_id!r} (line {line_no})")
        self.sample_id = sample_id
        self.line_no = line_no


class EmptyManifest(ManifestError):
    pass


# --- embedding store ---------------------------------------------------------

class EmbeddingFormatError(IrisPadError):
    pass


class BadMagic(EmbeddingFormatError):
    pass


class VersionUnsupported(EmbeddingFormatError):
    pass


class TruncatedPayload(EmbeddingFormatError):
    pass


class DimMismatch(EmbeddingFormatError):
    pass


class InvariantViolation(IrisPadError):
    pass


class MissingEmbedding(IrisPadError):
    def __init__(self, sample_id: str):
        super().__init__(f"no embedding for sample_id {sample_id!r}")
        self.sample_id = sample_id


# --- scores / metrics ---------------------------------------------------------

class ScoreSetError(IrisPadError):
    pass


class DegenerateScores(IrisPadError):
    """A metric needs both classes but one is empty."""


class NoSuchSpecies(DegenerateScores):
    def __init__(self, species: str):
        super().__init__(f"no attack entries of species {species!r}")
        self.species = species


class NoAttacks(DegenerateScores):
    pass


class NoBonaFide(DegenerateScores):
    pass


# --- training ------------------------------------------------------------------

class TrainingError(IrisPadError):
    category = "numeric"


class NanLoss(TrainingError):
    def __init__(self, epoch: int):
        super().__init__(f"loss became non-finite at epoch {epoch}")
        self.epoch = epoch


class GridSearchFailed(TrainingError):
    pass


class DegenerateData(IrisPadError):
    """A split is empty or contains a single class."""
