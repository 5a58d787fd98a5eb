# %% [markdown]
# # CSIT needed to match the orthogonal scheme
#
# Both the orthogonal scheme (with per-group coded caching) and the
# partitioned scheme can reach the OS delivery time with imperfect CSIT.
# The partitioned scheme needs strictly less once the system is overloaded.

# %%
from overcache.sweep import sweep_G, sweep_M

for K in (4, 8):
    print(f"K={K}, M=2")
    for row in sweep_G(K, 2, range(1, 9)):
        s = row.series
        print(f"  G={int(row.x)}  PS={float(s['alpha_ps']):.4f}  OS={float(s['alpha_os']):.4f}")

# %% [markdown]
# Against cache size, K = 4 and G = 2: the PS requirement falls faster.

# %%
by_M = sweep_M(4, 2)
for row in by_M:
    s = row.series
    print(f"M={int(row.x)}  PS={s['alpha_ps']}  OS={s['alpha_os']}")
for M, reason in by_M.skipped:
    print("skipped", M, reason)
