"""
=============================
Analytic bounds, side by side
=============================

Every closed-form bound next to the exact win probability.  Lower bounds
come from the surrogate-chain argument (and its weaker single-opponent
relaxation); upper bounds from playing each match at the average
head-to-head rate, and a format-free version of the same.
"""

# %%
import knockout as ko

values = ["6", "4", "3", "1", "1", "1"]
fmt = ko.balanced_format(len(values))
report = ko.bounds_report(values, fmt)
exact = ko.win_probabilities(values, fmt)

print("law of the surrogate's match count:",
      [str(p) for p in report.surrogate.pmf])
print(f"{'player':>6} {'weak':>8} {'lower':>8} {'exact':>8} {'upper':>8} {'univ.':>8}")
for b, p in zip(report.players, exact):
    weak = f"{float(b.weak_lower):.4f}" if b.weak_lower is not None else "-"
    print(f"{b.index + 1:>6} {weak:>8} {float(b.thm3_lower):8.4f} {float(p):8.4f} "
          f"{float(b.thm2_upper):8.4f} {float(b.universal_upper):8.4f}")

# %%
# Players whose average head-to-head rate is below one half can never win
# with probability 1/n or more, under any format.

n = len(values)
for b in report.players:
    if b.corollary2:
        print(f"player {b.index + 1}: universal bound {float(b.universal_upper):.4f} < 1/{n}")

# %%
# With a strongest player the starting weight share is a floor on the win
# probability.

lo, hi = ko.theorem1_bounds(values)
print(f"P1 >= {lo} (actual {float(exact[0]):.4f});  P6 <= {hi} (actual {float(exact[-1]):.4f})")
