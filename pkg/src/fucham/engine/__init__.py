"""Fuzzy chemical abstract machine: terms, rules, executor and file syntax."""
from .machine import (MachineDef, MachineOptions, Move, TraceStep, airlock_in, airlock_out,
                      candidate_moves, digest, format_trace_step, replay, run, step)
from .rules import (Match, ReactionRule, apply_reaction, feasible, match_rule, products,
                    really_applicable)
from .syntax import (MachineFile, format_machine, parse_machine, parse_molecule,
                     parse_molecule_list, parse_pattern, parse_solution, parse_trace_line)
from .terms import (EMPTY, Airlock, AirlockPat, App, AppPat, Atom, AtomPat, Membrane,
                    MembranePat, Solution, Var, canon, format_molecule, format_solution,
                    molecule_degree, solution_degree)
