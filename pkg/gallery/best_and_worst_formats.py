"""
=======================
Best and worst formats
=======================

Exhaustively evaluate every legal format and see which ones help or hurt a
given player.
"""

# %%
# One strong player among equals
# ------------------------------

from fractions import Fraction

import knockout as ko

p = Fraction(2, 3)  # chance the strong player beats anybody else
for n in range(3, 9):
    res = ko.search_formats([p / (1 - p)] + [1] * (n - 1), 0)
    print(f"n={n}: best {[str(f) for f in res.argmax]}, worst {[str(f) for f in res.argmin]}")

# %%
# Every entry of the table agrees with the one-line product formula.

n = 7
res = ko.search_formats([p / (1 - p)] + [1] * (n - 1), 0)
assert all(v == ko.special_case_win_prob(p, f) for f, v in res.table)

# %%
# General strengths
# -----------------
#
# For arbitrary values there is no theorem, only evidence.

res = ko.search_formats(["6", "4", "3", "1", "1", "1"], 0)
for f, v in sorted(res.table, key=lambda t: -t[1]):
    print(f"[{f}]  {float(v):.4f}")
print(res.conjecture_evidence())

# %%
# Verification suites
# -------------------

for rep in (ko.verify_special_case_theorems(8, Fraction(3, 5)),
            ko.verify_weakest_player_theorem(7, Fraction(1, 3)),
            ko.reproduce_counterexamples()):
    print(f"{rep.suite}: {'PASS' if rep.passed else 'FAIL'} ({len(rep.checks)} checks)")
