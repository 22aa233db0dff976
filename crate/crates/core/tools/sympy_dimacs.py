#!/usr/bin/env python3
"""Minimal DIMACS solver with SAT-competition output, backed by sympy.

Usage: sympy_dimacs.py FILE.cnf
"""
import sys

from sympy import symbols
from sympy.logic.algorithms.dpll2 import dpll_satisfiable
from sympy.logic.boolalg import And, Or, Not


def read(path):
    nvars, clauses, cur = 0, [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line[0] in "c%":
                continue
            if line.startswith("p"):
                nvars = int(line.split()[2])
                continue
            for tok in line.split():
                lit = int(tok)
                if lit == 0:
                    clauses.append(cur)
                    cur = []
                else:
                    cur.append(lit)
    return nvars, clauses


def main():
    nvars, clauses = read(sys.argv[1])
    print("c sympy dpll wrapper")
    if any(len(c) == 0 for c in clauses):
        print("s UNSATISFIABLE")
        return
    xs = symbols("x1:%d" % (nvars + 1)) if nvars else ()
    expr = And(*[Or(*[xs[abs(l) - 1] if l > 0 else Not(xs[abs(l) - 1]) for l in c]) for c in clauses])
    model = dpll_satisfiable(expr)
    if model is False:
        print("s UNSATISFIABLE")
        return
    print("s SATISFIABLE")
    vals = []
    for i in range(nvars):
        vals.append(str(i + 1) if model.get(xs[i], False) else str(-(i + 1)))
    for start in range(0, len(vals), 10):
        print("v " + " ".join(vals[start:start + 10]))
    print("v 0")


if __name__ == "__main__":
    main()
