"""Routing and entanglement dynamics through vertex bottlenecks."""

__version__ = "0.1.0"
