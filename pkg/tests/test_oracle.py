import pytest

from ltlpar.formula import Not, Or, parse
from ltlpar.gen import GenConfig, gen
from ltlpar.oracle import ClosureTooLarge, decide_reference
from ltlpar.tableau import SAT, UNSAT


@pytest.mark.parametrize("text,verdict", [
    ("p", SAT), ("Gp & F~p", UNSAT), ("p & ~p", UNSAT), ("GFp & GF~p", SAT), ("FGp & GF~p", UNSAT),
    ("p U q & G~q", UNSAT), ("~(p U q) & q", UNSAT), ("Xp & ~Xp", UNSAT), ("Xp&~Xp|XXq", SAT),
    ("G(p | Xq) & G~q & F~p", UNSAT), ("G(Fq) & G~q", UNSAT), ("~Gp & ~F~p", UNSAT),
])
def test_examples(text, verdict):
    assert decide_reference(parse(text)) == verdict


def test_excluded_middle_instances():
    for seed in range(1, 400):
        phi = gen(GenConfig(1 + seed % 7, seed))
        assert decide_reference(Or(phi, Not(phi))) == SAT


def test_contradiction_instances():
    from ltlpar.formula import And
    for seed in range(1, 200):
        phi = gen(GenConfig(1 + seed % 7, seed))
        assert decide_reference(And(phi, Not(phi))) == UNSAT


def test_size_guard():
    big = parse(" & ".join(f"F a{i}" for i in range(30)))
    with pytest.raises(ClosureTooLarge):
        decide_reference(big)
