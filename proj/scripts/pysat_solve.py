#!/usr/bin/env python3
"""Solver shim around python-sat for use as MGS_SAT_SOLVER / MGS_MAXSAT_SOLVER.

Usage: pysat_solve.py INSTANCE.{cnf,wcnf}

Prints competition-style output: "s ..." verdict, "o <cost>" for MaxSAT and
"v ..." model lines terminated by 0.  MaxSAT uses linear SAT-UNSAT search by
default; set PYSAT_MAXSAT=rc2 for the core-guided RC2 solver.
"""
import os
import sys


def print_model(model):
    line = ["v"]
    for lit in model:
        line.append(str(lit))
        if len(line) > 20:
            print(" ".join(line))
            line = ["v"]
    line.append("0")
    print(" ".join(line))


def solve_cnf(path):
    from pysat.formula import CNF
    from pysat.solvers import Cadical153

    cnf = CNF(from_file=path)
    with Cadical153(bootstrap_with=cnf.clauses) as s:
        if s.solve():
            print("s SATISFIABLE")
            print_model(s.get_model() or [])
            return 10
        print("s UNSATISFIABLE")
        return 20


def solve_wcnf(path):
    from pysat.formula import WCNF

    wcnf = WCNF(from_file=path)
    if os.environ.get("PYSAT_MAXSAT", "lsu") == "rc2":
        from pysat.examples.rc2 import RC2

        with RC2(wcnf) as rc2:
            model = rc2.compute()
            if model is None:
                print("s UNSATISFIABLE")
                return 20
            print("o %d" % rc2.cost)
            print("s OPTIMUM FOUND")
            print_model(model)
            return 30

    # Linear SAT-UNSAT search: improve a model under a tightening cardinality
    # bound until the bound is infeasible.
    from pysat.examples.lsu import LSU

    lsu = LSU(wcnf, solver="cd15")
    try:
        if not lsu.solve():
            print("s UNSATISFIABLE")
            return 20
        print("o %d" % lsu.cost)
        print("s OPTIMUM FOUND" if lsu.found_optimum() else "s UNKNOWN")
        print_model(lsu.get_model())
        return 30
    finally:
        lsu.delete()


def main(argv):
    if len(argv) != 2:
        sys.stderr.write("usage: pysat_solve.py INSTANCE\n")
        return 1
    path = argv[1]
    with open(path) as f:
        header = ""
        for line in f:
            if line.startswith("p "):
                header = line.split()[1]
                break
    sys.stdout.flush()
    return solve_wcnf(path) if header == "wcnf" else solve_cnf(path)


if __name__ == "__main__":
    sys.exit(main(sys.argv))
