"""Independent reference values frozen into the C++ unit tests.

Plain-Python enumeration (math.lgamma, itertools, fractions); shares no code
with the library. Run: python3 tests/oracles/frozen_values.py
"""
import itertools
import math
from fractions import Fraction


def family_log_ml(records, arities, i, parents, ess=None):
    q = 1
    for u in parents:
        q *= arities[u]
    r = arities[i]
    a_cell = 1.0 if ess is None else ess / (q * r)
    counts = {}
    for rec in records:
        j = tuple(rec[u] for u in parents)
        counts.setdefault(j, [0] * r)[rec[i]] += 1
    total = 0.0
    for row in counts.values():
        total += math.lgamma(a_cell * r) - math.lgamma(a_cell * r + sum(row))
        for c in row:
            total += math.lgamma(a_cell + c) - math.lgamma(a_cell)
    return total


def log_rho(n, size, k, family):
    if size > k:
        return None
    return 0.0 if family == "flat" else -math.log(math.comb(n - 1, size))


def posteriors(records, arities, k, family="cardinality_uniform", ess=None):
    """Sum over all orders and consistent parent sets, in linear space."""
    n = len(arities)
    beta = {}
    for i in range(n):
        others = [u for u in range(n) if u != i]
        for size in range(0, k + 1):
            for g in itertools.combinations(others, size):
                beta[(i, frozenset(g))] = math.exp(
                    log_rho(n, size, k, family) + family_log_ml(records, arities, i, list(g), ess))
    z = 0.0
    joint = [[0.0] * n for _ in range(n)]
    for order in itertools.permutations(range(n)):
        before = set()
        local = {}
        with_u = {}
        for v in order:
            tot = 0.0
            w = [0.0] * n
            for (i, g), b in beta.items():
                if i == v and g <= before:
                    tot += b
                    for u in g:
                        w[u] += b
            local[v] = tot
            with_u[v] = w
            before.add(v)
        prod = math.prod(local.values())
        z += prod
        for v in range(n):
            rest = prod / local[v]
            for u in range(n):
                if u != v:
                    joint[u][v] += rest * with_u[v][u]
    return math.log(z), [[joint[u][v] / z for v in range(n)] for u in range(n)]


def naive_down(s):
    n = len(s).bit_length() - 1
    return [sum(s[x] for x in range(len(s)) if x & t == t) for t in range(len(s))]


if __name__ == "__main__":
    # Local score: column [0, 0, 1], binary, empty parents, all-ones prior.
    ml = family_log_ml([(0,), (0,), (1,)], [2], 0, [])
    print("lml [0,0,1] =", repr(ml), " exact log(1/12) =", repr(math.log(Fraction(1, 12))))

    # Downward transform, n = 2, s = (1, 2, 3, 4).
    print("naive_down(1,2,3,4) =", naive_down([1, 2, 3, 4]))

    # Log-sum at the bottom of double range.
    print("log_sum(-700,-700) =", repr(-700 + math.log(2)))

    # Chernoff bounds.
    for n, k in [(10, 2), (3, 1), (5, 2)]:
        print(f"chernoff({n},{k}) =", repr(2**n * math.exp(-n / 4 + k - k * k / n)),
              " tail =", sum(math.comb(n, j) for j in range(k + 1)))

    recs = [(0, 0, 1), (1, 1, 1), (1, 1, 0), (0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
    lm, p = posteriors(recs, [2, 2, 2], 2)
    print("fixture A (k=2, cardinality_uniform, all-ones): log p(x) =", repr(lm))
    for row in p:
        print("   ", [repr(x) for x in row])
    lm, p = posteriors(recs, [2, 2, 2], 1, family="flat", ess=1.0)
    print("fixture B (k=1, flat, bdeu ess=1): log p(x) =", repr(lm))
    for row in p:
        print("   ", [repr(x) for x in row])
    print("spot beta_2({0}) fixture A =",
          repr(log_rho(3, 1, 2, "cardinality_uniform") + family_log_ml(recs, [2, 2, 2], 2, [0])))
