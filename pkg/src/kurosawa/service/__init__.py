"""HTTP service and persistence: the integration point for the CLI and UI."""

from .config import ServiceConfig, load_config, make_backend
from .store import ITEM_KINDS, JsonlStore, StoredItem

__all__ = [
    "ITEM_KINDS",
    "JsonlStore",
    "ServiceConfig",
    "StoredItem",
    "load_config",
    "make_backend",
]
