"""Exact toolkit for minimal log discrepancies of cyclic quotient and hyperquotient singularities."""

__version__ = "0.1.0"
TOOL_NAME = "mld-gap-lab"
