"""Monte Carlo over 3D mazes: how often does generation land on a conflicted entry?"""

from entombed import GenConfig, monte_carlo

report = monte_carlo(GenConfig(dimension=3, size=(20, 20, 20), boundary="random"), trials=20)
agg = report.aggregate()
print(report.summary().split("\n\nseed")[0])
print(f"\nper-step conflicted hit rate {agg['conflicted_hit_fraction']:.4f}"
      f" vs static fraction {report.static['conflicted_context_fraction']:.4f}")
