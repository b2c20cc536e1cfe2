import itertools
import random

from dkbv.satsolver import SatSolver


def _brute(n, clauses, assumptions=()):
    for bits in itertools.product([False, True], repeat=n):
        val = lambda l: bits[abs(l) - 1] == (l > 0)
        if all(val(a) for a in assumptions) and all(any(val(l) for l in c) for c in clauses):
            return True
    return False


def _check_model(model, clauses, assumptions=()):
    val = lambda l: model[abs(l)] == (l > 0)
    return all(val(a) for a in assumptions) and all(any(val(l) for l in c) for c in clauses)


def test_random_cnf_against_truth_tables():
    rng = random.Random(11)
    for _ in range(400):
        n = rng.randint(1, 9)
        clauses = [[rng.choice([-1, 1]) * rng.randint(1, n) for _ in range(rng.randint(1, 3))]
                   for _ in range(rng.randint(1, 4 * n))]
        s = SatSolver()
        for _ in range(n):
            s.new_var()
        for c in clauses:
            s.add_clause(c)
        assumptions = [rng.choice([-1, 1]) * rng.randint(1, n) for _ in range(rng.randint(0, 2))]
        got = s.solve(assumptions)
        assert got == _brute(n, clauses, assumptions)
        if got:
            assert _check_model(s.model, clauses, assumptions)
        # the solver stays usable after an assumption query
        assert s.solve() == _brute(n, clauses)


def test_incremental_clauses():
    s = SatSolver()
    a, b = s.new_var(), s.new_var()
    s.add_clause([a, b])
    assert s.solve([-a])
    assert s.model[b]
    s.add_clause([-b])
    assert not s.solve([-a])
    assert s.solve()
    s.add_clause([-a])
    assert not s.solve()
