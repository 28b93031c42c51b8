"""Stable models of weight-constraint programs via pseudo-boolean solving."""
from .errors import (NormalizationError, NotAModelError, ParseError, SizeError,
                     StablePBError)
from .program import (FALSUM, AtomTable, Program, Rule, WeightAtom, WeightedElem,
                      is_model, normalize, parse_program, parse_watom, render_program)
from .semantics import (canonical, enum_stable, enum_supported, is_stable, is_supported,
                        reduct, stability)
from .constraints import AbstractConstraint, cc_transform, expand, mc_transform
from .analysis import dependency_graph, terminating_loops, tight_on
from .translate import completion, emit_opb, loop_completion, loop_formula, translate_program
from .pbsolver import BackendConfig, SolveResult, Status, solve_builtin, solve_external
from .driver import pbmodels_solve

__version__ = "0.1.0"
