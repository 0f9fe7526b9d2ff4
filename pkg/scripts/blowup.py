"""How fast do p-normal forms grow with the number of labels?

Two families: sums in argument position (plusArg/plusFun duplicate the
application) and nested choices whose labels are bound in reverse order
(plusL/plusR duplicate the sibling branch).  Reports the size of the p-normal
form and the number of permutation steps for each label count.

    python3 scripts/blowup.py --max-labels 6
"""

import argparse
import time

from pel.perm import p_normalize
from pel.syntax import App, Choice, Gen, Label, Name, Var, fresh_id, size


def spread_args(n: int):
    """f (x1 (+) y1) ... (xn (+) yn): every argument sum must be lifted over the application."""
    t = Var(Name("f"))
    gens = []
    for i in range(1, n + 1):
        a = Label(f"l{i}", fresh_id())
        gens.append(a)
        t = App(t, Choice(a, Var(Name(f"x{i}")), Var(Name(f"y{i}"))))
    for a in reversed(gens):
        t = Gen(a, t)
    return t


def balanced(n: int):
    """Full binary tree of choices where deeper labels are bound further out."""
    labels = [Label(f"l{i}", fresh_id()) for i in range(n)]

    def tree(d):
        if d == n:
            return Var(Name(f"x{d}"))
        return Choice(labels[n - 1 - d], tree(d + 1), Var(Name(f"y{d}")))

    t = tree(0)
    for a in reversed(labels):
        t = Gen(a, t)
    return t


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-labels", type=int, default=6)
    ap.add_argument("--max-steps", type=int, default=2_000_000)
    args = ap.parse_args()
    print("family     labels  size  nf-size   steps   seconds")
    for name, make in (("args", spread_args), ("nested", balanced)):
        for n in range(1, args.max_labels + 1):
            t = make(n)
            start = time.perf_counter()
            nf, trace = p_normalize(t, args.max_steps)
            dt = time.perf_counter() - start
            print(f"{name:9s} {n:7d} {size(t):5d} {size(nf):8d} {len(trace):7d} {dt:9.3f}")


if __name__ == "__main__":
    main()
