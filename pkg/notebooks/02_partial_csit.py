# %% [markdown]
# # Trading CSIT quality for delivery time
#
# With imperfect channel knowledge the zero-forcing layer loses rate. The
# partitioned scheme responds by caching more of each file (smaller eta).
# This regenerates the delivery time vs CSIT quality curve for K = 8, G = 2.

# %%
from fractions import Fraction

from overcache import SystemConfig, csit_threshold_eta, man_delivery_time
from overcache.csit import min_csit
from overcache.sweep import sweep_alpha

cfg = SystemConfig(K=8, G=2, N_f=16, M=1)
curve = sweep_alpha(cfg)
for row in curve.rows[::10]:
    t = row.series["T_ps"]
    print(f"alpha={float(row.x):.2f}  T={float(t):.4f}  eta={row.extra['eta']:2d}  {row.extra['regime']}")

# %%
best = curve[-1].series["T_ps"]
print("alpha* =", csit_threshold_eta(cfg, curve[-1].extra["eta"]))
print("T_MAN / T(alpha=1) =", float(man_delivery_time(cfg) / best))

# %% [markdown]
# The inverse question: how much CSIT is needed to hit a target time?

# %%
for T in [Fraction(2), Fraction(3), Fraction(5)]:
    r = min_csit(cfg, T)
    print(f"T={T}: alpha >= {r.alpha} ({float(r.alpha):.4f}) using eta={r.eta}")

# %%
with open("delivery_time_vs_alpha.csv", "w") as fh:
    fh.write(curve.to_csv())
