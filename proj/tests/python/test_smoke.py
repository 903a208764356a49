"""End-to-end checks of the python surface against the compiled core."""

import pytest

import dqcert


def equality_formula():
    f = dqcert.Dqbf()
    f.add_universal(1)
    f.add_existential(2, [1])
    f.add_clause([-1, 2])
    f.add_clause([1, -2])
    return f


def arbiter_formula():
    # exists e with no dependencies, forall u . (u or e): needs one arbiter
    # in basic mode and two passes in the synthesis loop.
    f = dqcert.Dqbf()
    f.add_universal(1)
    f.add_existential(2, [])
    f.add_clause([1, 2])
    return f


def false_formula():
    # e3 may only see u1 but would have to equal u2.
    f = dqcert.Dqbf()
    f.add_universal(1)
    f.add_universal(2)
    f.add_existential(3, [1])
    f.add_clause([-2, 3])
    f.add_clause([2, -3])
    return f


def test_true_verdict_comes_with_a_certified_model():
    f = equality_formula()
    for mode in ("basic", "cegis"):
        r = dqcert.solve(f, mode=mode)
        assert r.is_true and bool(r)
        assert r.stats.arbiter_vars == 0
        assert "c skolem 2 depends 1 0" in r.model
        report = dqcert.validate_model(f, r.model)
        assert report.valid and bool(report)
        assert report.failing_clause == -1
        assert len(report.clause_seconds) == len(f.matrix())
        assert dqcert.enumerate_model_check(f, r.model)


def test_false_verdict_has_no_model():
    r = dqcert.solve(false_formula())
    assert not r.is_true and not bool(r)
    assert r.model is None


def test_formula_accessors_and_round_trip():
    f = false_formula()
    assert f.universals() == [1, 2]
    assert f.existentials() == [3]
    assert f.deps(3) == [1]
    assert f.num_universals == 2 and f.num_existentials == 1
    assert f.max_var == 3
    assert f.matrix() == [[-2, 3], [2, -3]]
    assert not f.add_clause([1, -1])  # tautologies are dropped

    parsed = dqcert.parse_dqdimacs(f.to_dqdimacs())
    assert parsed.warnings == []
    assert parsed.formula.matrix() == f.matrix()
    assert parsed.formula.deps(3) == [1]
    assert str(parsed.formula) == str(f) == dqcert.write_dqdimacs(f)


def test_solver_modes_agree_with_the_oracle():
    n_true = 0
    for seed in range(1, 41):
        f = dqcert.random_dqbf(
            n_universals=1 + seed % 4,
            n_existentials=1 + seed % 3,
            max_deps=2,
            n_clauses=2 + seed % 9,
            seed=seed,
        )
        expected = dqcert.brute_solve(f).is_true
        for mode in ("basic", "cegis"):
            r = dqcert.solve(f, mode=mode)
            assert r.is_true == expected, f"{mode} diverges on seed {seed}"
            if r.is_true:
                assert dqcert.validate_model(f, r.model).valid
        n_true += expected
    assert 0 < n_true < 40


def test_validation_pinpoints_a_wrong_model():
    f = equality_formula()
    constant_true = "c skolem 2 depends 1 0\nc aux-range 3 2\np cnf 2 1\n2 0\n"
    report = dqcert.validate_model(f, constant_true)
    assert not report.valid
    assert report.failing_clause == 1  # (u1 or not e2) fails at u1=0
    assert report.witness == {1: False, 2: True}
    assert "clause" in report.reason
    assert not dqcert.enumerate_model_check(f, constant_true)


def test_oracle_tables_spell_out_the_skolem_functions():
    b = dqcert.brute_solve(equality_formula())
    assert b.is_true
    assert b.tables == {2: [({1: False}, False), ({1: True}, True)]}
    assert not dqcert.brute_solve(false_formula()).tables


def test_stats_expose_the_synthesis_trace():
    r = dqcert.solve(arbiter_formula(), mode="basic")
    assert r.is_true
    assert r.stats.arbiter_vars == 1
    assert r.stats.arbiter_pairs == 1
    c = dqcert.solve(arbiter_formula(), mode="cegis")
    assert c.is_true
    assert c.stats.forcing_clauses == 1
    assert c.stats.consistency_checks == 1


def test_errors_surface_as_python_exceptions():
    assert issubclass(dqcert.ParseError, ValueError)
    assert issubclass(dqcert.ContractError, ValueError)
    assert issubclass(dqcert.InvariantError, RuntimeError)

    with pytest.raises(dqcert.ParseError):
        dqcert.parse_dqdimacs("junk")
    with pytest.raises(dqcert.ContractError):
        dqcert.solve(equality_formula(), mode="bogus")
    with pytest.raises(dqcert.InvariantError):
        dqcert.solve(arbiter_formula(), max_iterations=1)

    wide = dqcert.Dqbf()
    for v in range(1, 16):
        wide.add_universal(v)
    with pytest.raises(dqcert.ContractError):
        dqcert.brute_solve(wide)


def test_everything_is_deterministic():
    f = dqcert.random_dqbf(seed=7)
    assert f.to_dqdimacs() == dqcert.random_dqbf(seed=7).to_dqdimacs()
    a = dqcert.solve(equality_formula())
    b = dqcert.solve(equality_formula())
    assert a.model == b.model
