"""Metaphor generation toolkit.

Builds parallel literal/metaphorical corpora from poetry, generates
metaphorical rewrites with discriminator-guided decoding, evaluates
outputs, and serves an interactive writing assistant.
"""

__version__ = "0.1.0"
