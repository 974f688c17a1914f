"""Privacy-preserving inventory matching on a server-aided comparison core."""

__version__ = "0.1.0"
