"""orderlab: a symbolic laboratory for countable linear orders, circular
orders, and arc/knot descriptors, with decision procedures and certificates
on a documented fragment."""

__version__ = "0.1.0"
