"""Exact reference values for the C++ test fixtures.

Plain enumeration over explicit joint tables with rational arithmetic.
Run with `python3 tests/oracles/derive.py`; the printed values are the ones
frozen into the unit and acceptance tests.
"""

from fractions import Fraction as F
from itertools import combinations, product
from math import comb

GRID = [F(k, 100) for k in range(101)]


def brier(d, w):
    return 1 - (w - d) ** 2


def best(weights, decisions, payoff):
    vals = [sum(weights[w] * payoff(d, w) for w in range(len(weights))) for d in decisions]
    i = max(range(len(vals)), key=lambda k: (vals[k], -k))
    return i, vals[i]


def rational(joint, vars_, decisions, payoff, num_states=2):
    """joint: dict (values tuple, state) -> mass."""
    groups = {}
    for (vals, w), m in joint.items():
        key = tuple(vals[v] for v in vars_)
        groups.setdefault(key, [F(0)] * num_states)[w] += m
    return sum(best(ws, decisions, payoff)[1] for ws in groups.values())


def shapley(value, players):
    n = len(players)
    phi = []
    for i in players:
        rest = [p for p in players if p != i]
        total = F(0)
        for s in range(n):
            for c in combinations(rest, s):
                total += (value(set(c) | {i}) - value(set(c))) / (n * comb(n - 1, s))
        phi.append(total)
    return phi


def main():
    xor = {((a, b), a ^ b): F(1, 4) for a, b in product((0, 1), repeat=2)}
    r = lambda vs: rational(xor, sorted(vs), GRID, brier)
    print("xor R(none) =", r([]))
    print("xor R(s1) =", r([0]))
    print("xor R(s1,s2) =", r([0, 1]))
    print("xor gain(s1;none) =", r([0]) - r([]))
    print("xor gain(s1,s2;none) =", r([0, 1]) - r([]))
    print("xor shapley(none) =", shapley(lambda c: r(c) - r([]), [0, 1]))

    # Umbrella: decisions 0 = no umbrella, 1 = umbrella; states 0 = dry, 1 = rain.
    table = {(0, 0): 0, (0, 1): -100, (1, 0): -50, (1, 1): 0}
    prior = [F(6, 10), F(4, 10)]
    i, v = best(prior, [0, 1], lambda d, w: table[(d, w)])
    print("umbrella best =", i, "R(none) =", v)

    # Add-one smoothing: one binary signal, rows (state, signal) = (0,0), (1,1).
    counts = {(0, 0): 1, (1, 1): 1}
    cells = {(w, s): F(counts.get((w, s), 0) + 1, 2 + 4) for w in (0, 1) for s in (0, 1)}
    print("smoothed P(state,signal) =", cells)

    # Decision column equal to the state, uniform prior.
    ident = {((w,), w): F(1, 2) for w in (0, 1)}
    print("state-copy gain =", rational(ident, [0], GRID, brier) - rational(ident, [], GRID, brier))

    # Single signal equal to the state: n = 1 Shapley equals the full gain.
    print("state-copy shapley =", shapley(lambda c: rational(ident, sorted(c), GRID, brier) - F(3, 4), [0]))

    # Agent seeing sigma1 only on the XOR joint, eps = 0, argmax rule:
    # its report is constant (posterior always uniform), so it adds nothing.
    agent = {((a, b, 50), a ^ b): F(1, 4) for a, b in product((0, 1), repeat=2)}
    print("xor sigma1-agent gain(D; none) =", rational(agent, [2], GRID, brier) - F(3, 4))

    # Agent seeing both bits: report is 0.00 or 1.00.
    agent = {((a, b, 100 * (a ^ b)), a ^ b): F(1, 4) for a, b in product((0, 1), repeat=2)}
    print("xor full-agent gain(D; none) =", rational(agent, [2], GRID, brier) - F(3, 4))

    # Noisy full-information agent: with prob eps the report is uniform on the grid.
    for eps in (F(0), F(1, 2), F(1)):
        j = {}
        for a, b in product((0, 1), repeat=2):
            w = a ^ b
            for d in range(101):
                m = F(1, 4) * (eps / 101 + ((1 - eps) if d == 100 * w else 0))
                if m:
                    j[((a, b, d), w)] = j.get(((a, b, d), w), 0) + m
        print(f"xor full-agent eps={eps} gain(D; none) =",
              rational(j, [2], GRID, brier) - F(3, 4))


if __name__ == "__main__":
    main()
