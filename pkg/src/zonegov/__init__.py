"""Zone-based electronic speed governance: codec, channel, governor, sim, service."""

__version__ = "0.1.0"
