"""
=================================
Exact win and reach probabilities
=================================

Compute exact tournament win probabilities for a small field, look at how
the chance of reaching each round decays, and reproduce a case where a
player is *helped* by an opponent getting stronger.
"""

# %%
# A six player field
# ------------------
#
# Strengths are exact rationals.  The default format is the balanced one:
# 2 matches in round 1, then halve the field.

from fractions import Fraction

import knockout as ko

players = ko.PlayerValues.from_values(["6", "4", "3", "1", "1", "1"])
fmt = ko.balanced_format(players.n)
print("format:", fmt, "alive per round:", fmt.alive_counts)

engine = ko.TournamentEngine(players)
for i, p in enumerate(engine.win_probabilities(fmt)):
    print(f"player {i + 1}: {str(p):>24}  ~ {float(p):.6f}")

# %%
# Reach probabilities
# -------------------
#
# ``reach[i][s]`` is the chance player ``i`` is still alive at the start of
# round ``s + 1``.  The last column is the win probability.  Stronger players
# reach every round at least as often as weaker ones.

rm = engine.reach_matrix(fmt)
for i, row in enumerate(rm.reach):
    print(f"player {i + 1}:", "  ".join(f"{float(x):.4f}" for x in row))

# %%
# Formats matter
# --------------
#
# The same field under three matches in round 1 followed by single matches.

alt = ko.validate_format(6, [3, 1, 1])
print(f"P1 balanced {float(engine.win_probabilities(fmt)[0]):.4f}, "
      f"P1 [3,1,1] {float(engine.win_probabilities(alt)[0]):.4f}")

# %%
# A weaker opponent can hurt
# --------------------------
#
# With four players ``(2, 1, 1, x)`` under format ``[2, 1]`` the top
# player's chances are not monotone in ``x``.

f4 = ko.validate_format(4, [2, 1])
for x in ["1/100", "1/99"]:
    p = ko.win_probabilities(["2", "1", "1", x], f4)[0]
    print(f"x = {x:>5}: P1 = {p} ~ {float(p):.6f}")
