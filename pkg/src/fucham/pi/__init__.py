"""Fuzzy pi-calculus: syntax, substitution, cham encoding and reduction."""
from .congruence import normal_form, struct_congruent
from .process import (NIL, TAU, Input, Name, New, Output, Par, Repl, Sum, free_names,
                      fresh_name, substitute)
from .reduce import (Restriction, comm_ok, decode, eliminate, encode, is_quiescent, join,
                     pi_moves, pi_run, pi_run_solution, pi_step)
from .syntax import parse, pretty
