"""Photo-to-building reconstruction service.

A single photograph plus a user-drawn silhouette goes in; a procedural
building model (Wavefront OBJ) comes out. The package bundles the
geometry grammars, the silhouette-fitting pipeline, and a small
client-server job system (gateway, broker, slot-pinned workers).
"""

__version__ = "0.1.0"
