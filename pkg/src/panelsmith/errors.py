"""Exception hierarchy shared across the package.

Every failure a caller is expected to handle has its own class so tests
and API handlers can match on type rather than message text.
"""

from __future__ import annotations


class PanelsmithError(Exception):
    """Base class for all package-specific errors."""


# --- sequence graph ---------------------------------------------------------

class UnknownParent(PanelsmithError):
    pass


class UnknownNode(PanelsmithError):
    pass


class DuplicateId(PanelsmithError):
    pass


class CycleRejected(PanelsmithError):
    pass


class InvalidValue(PanelsmithError):
    pass


class MalformedDocument(PanelsmithError):
    pass


# --- affect pipeline --------------------------------------------------------

class DimensionMismatch(PanelsmithError):
    pass


class UnknownLabel(PanelsmithError):
    pass


# --- action planning --------------------------------------------------------

class MalformedManifest(PanelsmithError):
    pass


class UndeclaredEndpoint(MalformedManifest):
    pass


class UnknownAction(PanelsmithError):
    pass


class NoSuccessors(PanelsmithError):
    pass


class LengthMismatch(PanelsmithError):
    pass


# --- transitions ------------------------------------------------------------

class AllZeroWeights(PanelsmithError):
    pass


class NoAlternativeAsset(PanelsmithError):
    pass


# --- layer engine -----------------------------------------------------------

class DuplicateName(PanelsmithError):
    pass


class UnknownLayer(PanelsmithError):
    pass


class UnknownModel(PanelsmithError):
    pass


class LayerFailure(PanelsmithError):
    """A layer raised mid-pipeline; the sequence was rolled back."""

    def __init__(self, layer_name: str, cause: BaseException):
        super().__init__(f"layer {layer_name!r} failed: {cause}")
        self.layer_name = layer_name
        self.cause = cause


class UnknownSymbol(PanelsmithError):
    pass


class ProviderUnavailable(PanelsmithError):
    pass


class GenerationFailed(PanelsmithError):
    pass


# --- assets -----------------------------------------------------------------

class PathNotFound(PanelsmithError):
    pass


class UnsupportedFormat(PanelsmithError):
    pass


class UnknownSet(PanelsmithError):
    pass


# --- remote providers -------------------------------------------------------

class RemoteError(PanelsmithError):
    pass


class Timeout(RemoteError):
    pass


class BadResponse(RemoteError):
    pass


class ExhaustedRetries(RemoteError):
    pass
