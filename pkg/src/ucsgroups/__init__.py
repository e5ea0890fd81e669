"""Certify and construct UCS p-groups and exterior self-quotient modules."""

__version__ = "0.1.0"
