"""Timing sweeps and slope fits: structured O(n) versus dense O(n^3).

This is a fast, reduced version of the scripted experiment suite (see
`greenband example --help` for the full protocols).
"""

from greenband.bench import fit_records, run_bench

sizes = [250, 500, 1000, 2000]
print(f"sizes {sizes}, bandwidth r = 5, median of 3 trials\n")

for method in ("qr", "lu", "dense"):
    records = run_bench(sizes, r=5, method=method, trials=3, seed=0, oracle_cutoff=500)
    fit = fit_records(records)
    print(f"method {method:5s}: slope {fit.slope:5.2f}")
    for rec in records:
        err = "      (oracle skipped)" if rec.rel_err is None else f"  rel_err {rec.rel_err:.2e}"
        print(f"    n = {rec.n:5d}: {rec.seconds * 1e3:8.2f} ms{err}")
    print()

print("the structured methods scale like n (slope ~1); the dense reference")
print("scales like n^3 (slope well above 2 at these sizes).")
