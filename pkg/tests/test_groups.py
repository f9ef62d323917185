import numpy as np
import pytest

from maninbench.groups import (
    FiniteGroup,
    GroupAxiomError,
    alternating5,
    builtin,
    from_permutations,
    load_table,
    parse_cycles,
    projective_special_linear,
    save_table,
    special_linear,
)


def brute_center(G):
    return sorted(z for z in range(G.order) if all(G.mul[z, g] == G.mul[g, z] for g in range(G.order)))


def test_parse_cycles():
    assert parse_cycles("(1,2)(3,4)", 5) == (1, 0, 3, 2, 4)
    assert parse_cycles("(1 3 5)", 5) == (2, 1, 4, 3, 0)
    assert parse_cycles("()", 3) == (0, 1, 2)
    for bad in ("(1,2", "(1,6)", "(1,1)", "1 2"):
        with pytest.raises(ValueError):
            parse_cycles(bad, 5)


def test_alternating_group():
    A = alternating5()
    assert A.order == 60 and A.center == [0] == brute_center(A)
    assert sorted(len(c) for c in A.conjugacy_classes()) == [1, 12, 12, 15, 20]


def test_special_linear_center():
    S = special_linear(5)
    assert S.order == 120
    assert S.center == brute_center(S)
    assert len(S.center) == 2
    Q, proj = S.central_quotient()
    assert Q.order == 60 and Q.center == [Q.identity]
    assert all(proj[S.mul[a, b]] == Q.mul[proj[a], proj[b]] for a in range(0, 120, 7) for b in range(120))


def test_psl27():
    P = projective_special_linear(7)
    assert P.order == 168 and len(P.center) == 1
    assert len(P.conjugacy_classes()) == 6


def test_inverse_table():
    G = builtin("A5")
    assert np.all(G.mul[np.arange(G.order), G.inv] == G.identity)


def test_generated_and_generators():
    G = alternating5()
    assert len(G.generated(G.generators())) == 60
    assert len(G.generated([])) == 1


def test_permutations_from_tuples():
    S3 = from_permutations([(1, 0, 2), (1, 2, 0)])
    assert S3.order == 6 and S3.center == [S3.identity]
    with pytest.raises(ValueError):
        from_permutations(["(1,2)"])


def test_axiom_violations():
    with pytest.raises(GroupAxiomError):
        FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(GroupAxiomError):
        FiniteGroup([[0, 1, 2]])
    # a Latin square with identity that is not associative (order 5 loop)
    loop = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(GroupAxiomError, match="associative"):
        FiniteGroup(loop)


def test_table_roundtrip(tmp_path):
    G = alternating5()
    path = tmp_path / "a5.tbl"
    save_table(G, path)
    assert path.read_text().startswith("# maninbench-group-table v1 order=60 name=A5\n")
    H = load_table(path)
    assert H.order == 60 and np.array_equal(H.mul, G.mul) and H.name == "A5"


def test_table_file_errors(tmp_path):
    path = tmp_path / "t.tbl"
    path.write_text("# maninbench-group-table v2 order=1\n0\n")
    with pytest.raises(ValueError, match="version"):
        load_table(path)
    path.write_text("0 1\n1 0\n")
    with pytest.raises(ValueError, match="header"):
        load_table(path)
    path.write_text("# maninbench-group-table v1 order=2\n0 1\n")
    with pytest.raises(ValueError, match="2x2"):
        load_table(path)


def test_unknown_builtin():
    with pytest.raises(ValueError, match="unknown group"):
        builtin("M11")


def test_quotient_requires_normal_subgroup():
    S3 = from_permutations(["(1,2)", "(1,2,3)"], degree=3)
    transposition = S3.generated([1])
    with pytest.raises(ValueError, match="normal"):
        S3.quotient(transposition)
