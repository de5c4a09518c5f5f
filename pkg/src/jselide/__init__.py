"""jselide: learn which JS functions real page loads execute, elide the rest.

An intercepting proxy rewrites JavaScript resources to report which
functions actually run (the learning phase), then serves variants whose
never-executed function bodies are replaced by synchronous on-demand
fallback stubs (the elided phase). A reporter exports superfluous-code
statistics, and a CSS elider drops rules outside externally observed byte
ranges.
"""

from .analyzer import (
    FunctionUnit,
    ParseError,
    ResourceAnalysis,
    ResourceKey,
    SourceSpan,
    analyze,
    function_id,
)
from .cache import CachedResource, ResourceCache, decode_body, transcode
from .party import Party, classify_party, registrable_domain
from .proxy import ElideProxy, ProxyConfig, ServeMode
from .report import new_id_rate, page_report, resource_stats
from .runtime import RuntimeTemplates, default_templates
from .store import (
    CoverageBeacon,
    CoverageRecord,
    CoverageStore,
    PhasePolicy,
    ResourcePhase,
)
from .transform import (
    ElisionPolicy,
    ElisionResult,
    ElisionStats,
    InstrumentedResource,
    elide,
    elide_css,
    instrument,
    strip_instrumentation,
)

__version__ = "0.1.0"

__all__ = [
    "FunctionUnit", "ParseError", "ResourceAnalysis", "ResourceKey", "SourceSpan",
    "analyze", "function_id",
    "CachedResource", "ResourceCache", "decode_body", "transcode",
    "Party", "classify_party", "registrable_domain",
    "ElideProxy", "ProxyConfig", "ServeMode",
    "new_id_rate", "page_report", "resource_stats",
    "RuntimeTemplates", "default_templates",
    "CoverageBeacon", "CoverageRecord", "CoverageStore", "PhasePolicy", "ResourcePhase",
    "ElisionPolicy", "ElisionResult", "ElisionStats", "InstrumentedResource",
    "elide", "elide_css", "instrument", "strip_instrumentation",
    "__version__",
]
