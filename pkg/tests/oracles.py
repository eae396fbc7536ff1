"""Independent brute-force reference computations.

Nothing here imports helixinfo; these routines are the second route used to
freeze expected values and to cross-check the library.
"""
from fractions import Fraction
from itertools import product
from math import log2


def mobius_cells(u, i, g, ui, ug, ig, uig, total=None):
    """Exclusive cells from overlapping counts by summing over supersets.

    Each exclusive pattern S gets sum_{T >= S} (-1)^(|T|-|S|) n(T), where n(T)
    is the overlapping count for the term set T and n({}) is the total.
    """
    overlap = {
        frozenset("u"): u, frozenset("i"): i, frozenset("g"): g,
        frozenset("ui"): ui, frozenset("ug"): ug, frozenset("ig"): ig,
        frozenset("uig"): uig,
    }
    cells = {}
    for pattern in product((0, 1), repeat=3):
        present = frozenset(a for a, bit in zip("uig", pattern) if bit)
        if not present:
            continue
        acc = 0
        for sup, n in overlap.items():
            if present <= sup:
                acc += (-1) ** (len(sup) - len(present)) * n
        cells[pattern] = acc
    cells[(0, 0, 0)] = 0 if total is None else total - sum(cells.values())
    return cells


def joint_probs(cells):
    total = sum(cells.values())
    return {k: v / total for k, v in cells.items()}


def triple_sum_transmission(cells):
    """Sum p(uig) log2[p(ui) p(ig) p(ug) / (p(uig) p(u) p(i) p(g))] directly."""
    p = joint_probs(cells)

    def m(keep, pattern):
        return sum(q for k, q in p.items() if all(k[a] == pattern[a] for a in keep))

    t = 0.0
    for k, q in p.items():
        if q <= 0:
            continue
        num = m((0, 1), k) * m((1, 2), k) * m((0, 2), k)
        den = q * m((0,), k) * m((1,), k) * m((2,), k)
        t += q * log2(num / den)
    return t


def pair_transmission(cells, a, b):
    """Sum p(x,y) log2[p(x,y) / (p(x) p(y))] over the (a, b) margin."""
    p = joint_probs(cells)
    t = 0.0
    for x, y in product((0, 1), repeat=2):
        pxy = sum(q for k, q in p.items() if k[a] == x and k[b] == y)
        px = sum(q for k, q in p.items() if k[a] == x)
        py = sum(q for k, q in p.items() if k[b] == y)
        if pxy > 0:
            t += pxy * log2(pxy / (px * py))
    return t


def enumerate_margin(cells, axes):
    """Marginal distribution by explicit enumeration, exact in Fractions."""
    total = sum(Fraction(v) for v in cells.values())
    out = {}
    for key in product((0, 1), repeat=len(axes)):
        out[key] = sum(Fraction(v) for k, v in cells.items()
                       if tuple(k[a] for a in axes) == key) / total
    return [out[k] for k in sorted(out)]


def closed_form_ols(xs, ys):
    n = len(xs)
    sx, sy = sum(xs), sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
    return slope, (sy - slope * sx) / n


TABLE5 = [
    (1993, 3063, 9716, 2619, 401, 588, 334, 63, 110540),
    (1994, 3359, 10568, 2855, 479, 684, 390, 89, 114564),
    (1995, 3710, 10800, 2828, 529, 771, 410, 93, 114864),
    (1996, 4552, 12147, 3149, 703, 963, 488, 114, 122953),
    (1997, 5406, 12699, 3604, 814, 1199, 583, 168, 125884),
    (1998, 7623, 17068, 4708, 1254, 1658, 807, 266, 166801),
    (1999, 8326, 18553, 4856, 1352, 1735, 844, 235, 170265),
    (2000, 8488, 19368, 4831, 1399, 1776, 865, 267, 176350),
    (2001, 9190, 20812, 5136, 1591, 1868, 996, 296, 184172),
]


if __name__ == "__main__":
    cube_t, closed_t = [], []
    for year, *counts, total in TABLE5:
        full = mobius_cells(*counts, total=total)
        closed = mobius_cells(*counts)
        cube_t.append(triple_sum_transmission(full))
        closed_t.append(triple_sum_transmission(closed))
        print(year, repr(cube_t[-1]), repr(closed_t[-1]), full[(0, 0, 0)])
    years = [r[0] for r in TABLE5]
    print("cube slope/intercept", closed_form_ols(years, cube_t))
    print("closed7 slope/intercept", closed_form_ols(years, closed_t))
    print("1993 margin U", [float(x) for x in enumerate_margin(mobius_cells(*TABLE5[0][1:8], total=TABLE5[0][8]), (0,))])
