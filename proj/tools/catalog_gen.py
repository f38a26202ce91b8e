"""Regenerates catalog/*.json from explicit supermatrix realizations.

Structure constants are read off supercommutators and the form is the supertrace
(trace for sl2), so the catalog does not depend on the C++ code it feeds.
"""

import json
import sys
from fractions import Fraction
from pathlib import Path


def E(n, i, j):
    m = [[Fraction(0)] * n for _ in range(n)]
    m[i][j] = Fraction(1)
    return m


def add(*terms):
    n = len(terms[0][1])
    out = [[Fraction(0)] * n for _ in range(n)]
    for c, m in terms:
        for i in range(n):
            for j in range(n):
                out[i][j] += c * m[i][j]
    return out


def matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


class Super:
    def __init__(self, even_rows):
        self.even_rows = even_rows

    def parity(self, m):
        n = len(m)
        ps = set()
        for i in range(n):
            for j in range(n):
                if m[i][j] != 0:
                    ps.add(int((i < self.even_rows) != (j < self.even_rows)))
        if len(ps) != 1:
            raise ValueError("matrix is not parity homogeneous")
        return ps.pop()

    def bracket(self, a, b, pa, pb):
        sign = -1 if pa and pb else 1
        return add((1, matmul(a, b)), (-sign, matmul(b, a)))

    def strace(self, m):
        return sum(m[i][i] if i < self.even_rows else -m[i][i] for i in range(len(m)))


def solve_in_basis(basis, m):
    """Coefficients of m in the span of basis matrices (exact elimination)."""
    n = len(m)
    cols = [[x for row in b for x in row] for b in basis]
    target = [x for row in m for x in row]
    rows = [[cols[k][r] for k in range(len(basis))] + [target[r]] for r in range(n * n)]
    piv = []
    r = 0
    for c in range(len(basis)):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][-1] != 0:
            raise ValueError("bracket leaves the span of the basis")
    coeffs = [Fraction(0)] * len(basis)
    for i, c in enumerate(piv):
        coeffs[c] = rows[i][-1]
    return coeffs


def fmt(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def document(name, sup, named, triple=None, form_scale=1):
    names = [n for n, _ in named]
    basis = [m for _, m in named]
    par = [sup.parity(m) for m in basis]
    brackets = []
    for i in range(len(basis)):
        for j in range(i, len(basis)):
            c = solve_in_basis(basis, sup.bracket(basis[i], basis[j], par[i], par[j]))
            if any(x != 0 for x in c):
                brackets.append({"i": i, "j": j, "coeffs": [fmt(x) for x in c]})
    form = [[fmt(form_scale * sup.strace(matmul(a, b))) for b in basis] for a in basis]
    doc = {
        "name": name,
        "basis": [{"name": n, "parity": "odd" if p else "even"} for n, p in zip(names, par)],
        "brackets": brackets,
        "form": form,
    }
    if triple:
        doc["sl2_triple"] = {k: [fmt(x) for x in solve_in_basis(basis, m)] for k, m in triple.items()}
    return doc


def catalog():
    docs = {}

    s = Super(2)
    e, h, f = E(2, 0, 1), add((1, E(2, 0, 0)), (-1, E(2, 1, 1))), E(2, 1, 0)
    docs["sl2"] = document("sl2", s, [("e", e), ("h", h), ("f", f)], {"e": e, "h": h, "f": f})

    s = Super(1)
    docs["gl11"] = document(
        "gl11", s, [("a", E(2, 0, 0)), ("d", E(2, 1, 1)), ("u", E(2, 0, 1)), ("v", E(2, 1, 0))]
    )

    # osp(1|2) inside gl(1|2): row 0 even, rows 1, 2 odd.
    s = Super(1)
    e = E(3, 1, 2)
    h = add((1, E(3, 1, 1)), (-1, E(3, 2, 2)))
    f = E(3, 2, 1)
    x = add((1, E(3, 0, 2)), (1, E(3, 1, 0)))
    y = add((1, E(3, 0, 1)), (-1, E(3, 2, 0)))
    # Supertrace on gl(1|2) is negative on sp(2); rescale so that (e, f) = 1.
    docs["osp12"] = document(
        "osp12", s, [("e", e), ("h", h), ("f", f), ("x", x), ("y", y)], {"e": e, "h": h, "f": f}, form_scale=-1
    )

    s = Super(2)
    e, f = E(3, 0, 1), E(3, 1, 0)
    h = add((1, E(3, 0, 0)), (-1, E(3, 1, 1)))
    z = add((1, E(3, 0, 0)), (1, E(3, 1, 1)), (2, E(3, 2, 2)))
    named = [("e", e), ("h", h), ("f", f), ("z", z)]
    named += [("E13", E(3, 0, 2)), ("E23", E(3, 1, 2)), ("E31", E(3, 2, 0)), ("E32", E(3, 2, 1))]
    docs["sl21"] = document("sl21", s, named, {"e": e, "h": h, "f": f})
    return docs


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "catalog"
    out.mkdir(parents=True, exist_ok=True)
    for name, doc in catalog().items():
        (out / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
