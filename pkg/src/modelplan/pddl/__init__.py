"""PDDL fragment: syntax tree, parser, printer and checks."""

from .ast import (
    OBJECT,
    TOTAL_COST,
    ActionDef,
    And,
    Atom,
    FunctionAssign,
    FunctionDecl,
    FunctionTerm,
    Increase,
    Not,
    PddlDomain,
    PddlProblem,
    PredicateDecl,
    TypedEntry,
)
from .check import check_domain, check_problem, infer_requirements
from .parser import PddlParseError, parse_any, parse_domain, parse_problem, parse_syntax
from .printer import print_domain, print_problem

__all__ = [
    "OBJECT", "TOTAL_COST", "ActionDef", "And", "Atom", "FunctionAssign", "FunctionDecl",
    "FunctionTerm", "Increase", "Not", "PddlDomain", "PddlProblem", "PredicateDecl", "TypedEntry",
    "check_domain", "check_problem", "infer_requirements", "PddlParseError", "parse_any",
    "parse_domain", "parse_problem", "parse_syntax", "print_domain", "print_problem",
]
