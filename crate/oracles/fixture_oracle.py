"""Independent numpy oracle for the bundled steel-pipe fixtures.

Computes column-normalized row-average priorities, lambda_max, CI, CR and a
dense eigensolver reference, independent of the Rust implementation.
"""
import numpy as np
from fractions import Fraction as F

RI = [0, 0, 0, .58, .90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49]

def full(upper, n):
    a = np.ones((n, n))
    for (i, j), v in upper.items():
        a[i, j] = float(v); a[j, i] = 1 / float(v)
    return a

def rowavg(a):
    return (a / a.sum(axis=0)).mean(axis=1)

def analyze(a):
    n = len(a); w = rowavg(a)
    lam = np.mean(a @ w / w)
    ci = max((lam - n) / (n - 1), 0)
    return w, lam, ci, ci / RI[n]

def upper_from_rows(rows):
    n = len(rows)
    return {(i, j): rows[i][j] for i in range(n) for j in range(i + 1, n)}, n

MATS = {
 "criteria": [[1, 9, 5, 9], [0, 1, F(1, 4), 3], [0, 0, 1, 5], [0] * 4],
 "quality": [[1, 1, 1, 1, 1, 5], [0, 1, 1, 1, 1, 6], [0, 0, 1, 1, 1, 8], [0, 0, 0, 1, 1, 8], [0, 0, 0, 0, 1, 8], [0] * 6],
 "cost": [[1, F(1, 7), 1, 1, F(1, 9), F(1, 9)], [0, 1, 1, 5, F(1, 7), F(1, 5)], [0, 0, 1, 1, F(1, 8), F(1, 8)], [0, 0, 0, 1, F(1, 8), F(1, 7)], [0, 0, 0, 0, 1, 1], [0] * 6],
 "delivery": [[1, 8, 1, 5, 1, 1], [0, 1, F(1, 5), F(1, 5), F(1, 8), F(1, 5)], [0, 0, 1, 7, 1, 1], [0, 0, 0, 1, F(1, 7), F(1, 5)], [0, 0, 0, 0, 1, 5], [0] * 6],
 "vrm": [[1, 1, F(1, 5), F(1, 5), 1, 1], [0, 1, F(1, 5), F(1, 5), 1, 1], [0, 0, 1, 1, 6, 1], [0, 0, 0, 1, 7, 6], [0, 0, 0, 0, 1, 1], [0] * 6],
}

res = {}
for name, rows in MATS.items():
    up, n = upper_from_rows(rows)
    a = full(up, n)
    w, lam, ci, cr = analyze(a)
    ev, evec = np.linalg.eig(a)
    k = np.argmax(ev.real); v = np.abs(evec[:, k].real); v /= v.sum()
    res[name] = w
    print(f"{name}: w={np.array2string(w, precision=17, separator=',')}")
    print(f"   lam={lam!r} ci={ci!r} cr={cr!r}")
    print(f"   eig lam={ev.real[k]!r} vec={np.array2string(v, precision=17, separator=',')}")
    print(f"   eig cr={(ev.real[k]-n)/(n-1)/RI[n]!r}")

crit = res["criteria"]
leaves = {}
names = {"quality": ["TS", "I", "S", "C", "TC", "CI"], "cost": ["L", "BOD", "DRC", "CE", "CP", "CPP"],
         "delivery": ["F", "TI", "GL", "DM", "GC", "DRT"], "vrm": ["CA", "SI", "BR", "LR", "RDA", "SUI"]}
for ci_, key in enumerate(["quality", "cost", "delivery", "vrm"]):
    for j, nm in enumerate(names[key]):
        leaves[nm] = crit[ci_] * res[key][j]
total = 0.0
for v in leaves.values():
    total += v
print("sum leaves", repr(total))
for k, v in sorted(leaves.items(), key=lambda kv: -kv[1]):
    print(f"  {k} {v:.6f}")

# ratings, one column per leaf in this order
rows = ["S", "C", "TC", "I", "TS", "GC", "F", "GL", "DRT", "CP", "CPP", "CI", "LR", "BR", "DM", "BOD", "TI", "SUI", "DRC", "CE", "L", "CA", "SI", "RDA"]
api = {
 "A": [9,9,9,9,9,9,9,9,9,8,8,9,8,9,9,8,9,8,8,7,7,9,7,8],
 "B": [9,9,8,9,8,9,8,8,9,9,9,7,9,9,9,9,9,9,8,9,8,7,9,5],
 "C": [9,9,8,9,8,9,7,7,9,9,9,7,9,9,9,9,9,9,8,9,9,7,9,5],
 "D": [9,9,8,9,8,9,7,7,9,9,9,7,9,9,9,9,9,9,8,9,7,7,9,5],
 "E": [9,9,9,9,9,9,8,8,9,8,8,9,8,9,9,8,9,8,8,7,8,9,7,8],
}
isv = {
 "P": [9,9,9,9,9,9,8,8,9,8,8,9,8,9,9,8,9,8,8,7,8,9,7,8],
 "A": [9,9,9,9,9,9,9,9,9,8,8,9,8,9,9,8,9,8,8,7,7,9,7,8],
 "B": [9,9,8,9,8,9,8,8,9,9,9,7,9,9,9,9,9,9,8,9,8,7,9,5],
 "C": [9,9,8,9,8,9,7,7,9,9,9,7,9,9,9,9,9,9,8,9,9,7,9,5],
 "Q": [9,9,9,9,9,9,8,8,9,8,8,9,8,9,9,8,9,8,8,7,7,9,7,8],
}
groups = {"quality": names["quality"], "delivery": names["delivery"]}
for label, tab in [("API", api), ("IS", isv)]:
    print(label)
    for v, r in tab.items():
        tot = sum(leaves[l] * x for l, x in zip(rows, r))
        q = sum(leaves[l] * x for l, x in zip(rows, r) if l in groups["quality"])
        d = sum(leaves[l] * x for l, x in zip(rows, r) if l in groups["delivery"])
        print(f"  {v} total={tot!r} quality={q!r} delivery={d!r}")

# contradiction and all-9 fixtures
for nm, up, n in [("all9_4", {(i, j): 9 for i in range(4) for j in range(i + 1, 4)}, 4),
                  ("triple", {(0, 1): 9, (1, 2): 9, (0, 2): F(1, 9)}, 3)]:
    w, lam, ci, cr = analyze(full(up, n))
    print(nm, list(w), repr(lam), repr(ci), repr(cr))
# quality>cost flipped to 1/9
rows_c = [r[:] for r in MATS["criteria"]]; rows_c[0][1] = F(1, 9)
up, n = upper_from_rows(rows_c)
w, lam, ci, cr = analyze(full(up, n))
print("flipped", list(w), repr(lam), repr(ci), repr(cr))

# smallest single-rating change that lets E overtake A (ties broken by leaf order)
def total(r):
    return sum(leaves[l] * x for l, x in zip(rows, r))
best = None
tree_order = [l for k in ["quality", "cost", "delivery", "vrm"] for l in names[k]]
for leaf in tree_order:
    i = rows.index(leaf)
    for val in range(11):
        r = api["E"][:]; r[i] = val
        if total(r) > total(api["A"]):
            d = abs(val - api["E"][i])
            if best is None or d < best[0]:
                best = (d, leaf, val, total(r))
print("whatif flip", best)
