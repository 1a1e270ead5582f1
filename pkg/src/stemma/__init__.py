"""stemma: a collaborative interactive-evolution platform.

Persistent, branchable, content-addressed archive of evolutionary artifacts
with full lineage; a domain-plugin model (CPPN pictures, bitstrings); an
interactive/automated session engine; an HTTP/JSON service; and a CLI.
"""

__version__ = "0.1.0"

from .archive import Archive, ArtifactRecord, compute_artifact_id, open_store
from .domains import Registry
from .session import SessionManager, run_automated

__all__ = [
    "Archive", "ArtifactRecord", "compute_artifact_id", "open_store",
    "Registry", "SessionManager", "run_automated", "__version__",
]
