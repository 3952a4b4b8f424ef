"""Independent oracles: path combinatorics for monomial algebras and Fraction linear algebra.

None of this touches the package's linear algebra; it is used to cross-check it.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction


# ---------------------------------------------------------------------------
# exact linear algebra over Q or F_p with plain Python integers


def frac_rref(rows: list, p: int = 0):
    """Reduced row echelon form over Q (p = 0) or F_p, on lists of lists."""
    def norm(x):
        return x % p if p else Fraction(x)

    def inv(x):
        return pow(int(x), p - 2, p) if p else 1 / x

    R = [[norm(x) for x in row] for row in rows]
    if not R:
        return R, []
    nr, nc = len(R), len(R[0])
    piv, r = [], 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if R[i][c] != 0), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        iv = inv(R[r][c])
        R[r] = [norm(x * iv) for x in R[r]]
        for i in range(nr):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [norm(a - f * b) for a, b in zip(R[i], R[r])]
        piv.append(c)
        r += 1
        if r == nr:
            break
    return R, piv


def frac_rank(rows: list, p: int = 0) -> int:
    return len(frac_rref(rows, p)[1])


# ---------------------------------------------------------------------------
# monomial algebras: words are arrow-name tuples in application order


def _ends(arrows: dict, w: tuple) -> tuple:
    return arrows[w[0]][0], arrows[w[-1]][1]


def _composable(arrows: dict, w: tuple) -> bool:
    return all(arrows[a][1] == arrows[b][0] for a, b in zip(w, w[1:]))


def paths(arrows: dict, length: int) -> list:
    out = [(a,) for a in arrows]
    for _ in range(length - 1):
        out = [w + (a,) for w in out for a in arrows if arrows[w[-1]][1] == arrows[a][0]]
    return out


def _contains(w: tuple, r: tuple) -> bool:
    n = len(r)
    return any(w[k:k + n] == r for k in range(len(w) - n + 1))


def monomial_dims(vertices: list, arrows: dict, relations: list, D: int) -> list:
    """dim A_n for n <= D: paths of length n avoiding every relation as a subword."""
    dims = [len(vertices)]
    for n in range(1, D + 1):
        dims.append(sum(1 for w in paths(arrows, n) if not any(_contains(w, r) for r in relations)))
    return dims


def _occurrences(w: tuple, relations: list):
    for r in relations:
        n = len(r)
        for s in range(len(w) - n + 1):
            if w[s:s + n] == r:
                yield s, s + n


def anick_chains(arrows: dict, relations: list, n_max: int, max_len: int) -> list:
    """Anick chains: list over n of [(word, cuts)], chains of length at most max_len.

    An (n+1)-chain extends an n-chain with cuts b_0 < ... < b_n by the shortest
    tail v such that w[b_{n-1}:] + v contains exactly one relation, as a suffix
    starting before b_n.
    """
    chains = [[((a,), (0, 1)) for a in arrows]]
    for _ in range(1, n_max):
        nxt = []
        for w, cuts in chains[-1]:
            lo, hi = cuts[-2], cuts[-1]
            frontier = [w]
            while frontier:
                new = []
                for u in frontier:
                    if len(u) >= max_len:
                        continue
                    for a in arrows:
                        if arrows[u[-1]][1] != arrows[a][0]:
                            continue
                        x = u + (a,)
                        occ = [(s, e) for s, e in _occurrences(x[lo:], relations)]
                        if not occ:
                            new.append(x)
                            continue
                        if len(occ) == 1 and occ[0][1] == len(x) - lo and occ[0][0] + lo < hi:
                            nxt.append((x, cuts + (len(x),)))
                        # any other relation occurrence kills this branch
                frontier = new
        chains.append(nxt)
    return chains


def monomial_betti(vertices: list, arrows: dict, relations: list, v, H: int, max_len: int) -> dict:
    """Generator multisets {i: Counter((target vertex, degree))} of the minimal resolution of S(v)."""
    ch = anick_chains(arrows, relations, H, max_len)
    out = {0: Counter({(v, 0): 1})}
    for i in range(1, H + 1):
        out[i] = Counter((arrows[w[-1]][1], len(w)) for w, _ in ch[i - 1] if arrows[w[0]][0] == v)
    return out


def truncated_relations(arrows: dict, d: int) -> list:
    return [w for w in paths(arrows, d)]


EXAMPLE = (["1", "2", "3"], {"alpha": ("1", "1"), "beta": ("1", "2"), "gamma": ("2", "3")},
           [("alpha", "alpha", "alpha"), ("alpha", "beta", "gamma")])

ONE_LOOP = {"x": ("v", "v")}
TWO_LOOPS = {"x": ("v", "v"), "y": ("v", "v")}
THREE_CYCLE = {"a": ("1", "2"), "b": ("2", "3"), "c": ("3", "1")}
KRONECKER = {"a": ("1", "2"), "b": ("1", "2")}


def oracle_for_builtin(name: str):
    """(vertices, arrows, monomial relations) for the monomial built-ins, else None."""
    if name == "cubic-loop":
        return EXAMPLE
    if name.startswith("trunc-poly-"):
        d = int(name.rsplit("-", 1)[1])
        return ["v"], ONE_LOOP, truncated_relations(ONE_LOOP, d)
    table = {"two-loops-J3": (["v"], TWO_LOOPS), "three-cycle-J3": (["1", "2", "3"], THREE_CYCLE),
             "kronecker-J3": (["1", "2"], KRONECKER)}
    if name in table:
        verts, arr = table[name]
        return verts, arr, truncated_relations(arr, 3)
    return None
