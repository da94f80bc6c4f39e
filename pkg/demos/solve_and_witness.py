"""Decide a few formulas serially and check the lasso models that come back."""

from ltlpar import check_witness, parse, render, solve, to_nnf
from ltlpar.tableau import format_witness

for text in ["Xp&~Xp|XXq", "GFp & GF~p", "Gp & F~p", "G(p | q) & Fp & Fq"]:
    f = parse(text)
    v = solve(f)
    print(f"{render(f)}    (normal form: {render(to_nnf(f))})")
    print(f"  {v.outcome} after {v.stats.vertices_expanded} vertices, deepest branch {v.stats.max_depth}")
    if v.witness is not None:
        print("  " + format_witness(v.witness).replace("\n", "\n  "))
        print(f"  model checks out: {check_witness(f, v.witness)}")
