"""HTTP sentence/token embedding service with a deterministic encoder."""

__version__ = "0.1.0"

from .encoder import DEFAULT_MODEL, MAX_TOKENS, TinyTransformerEncoder
from .service import canonical_request_key, create_app, record_fixtures
