class ExtractError(Exception):
    pass


class BackboneLoadError(ExtractError):
    pass


class UndecodableImage(ExtractError):
    pass


class MissingImage(ExtractError):
    def __init__(self, sample_id: str, path: str):
        super().__init__(f"image for sample_id {sample_id!r} not found: {path}")
        self.sample_id = sample_id
        self.path = path


class ManifestFormatError(ExtractError):
    pass
