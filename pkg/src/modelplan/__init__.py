"""Compile planning-annotated system models into PDDL and solve the result."""

__version__ = "0.1.0"
