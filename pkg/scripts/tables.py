"""Print the computational-load gain table and the threshold-fit table."""
from ddl_radar.load import LoadParams, load_gain
from ddl_radar.threshold_fit import fit_threshold_approx


def main():
    print("floored load gain (rows n = 4, 5, 6; columns N = 64, 128, 256)")
    for n in (4, 5, 6):
        gains = [load_gain(LoadParams(N=N, n=n)) for N in (64, 128, 256)]
        print(f"  n={n}: " + "  ".join(f"{g.gain_floor:4d} ({g.gain:8.3f})" for g in gains))
    print("\nthreshold approximation alpha(P) = c1 P^(-1/c2) - c3 on [1e-16, 1e-6]")
    print(f"  {'n':>2} {'K':>3} {'minimax %':>10} {'max dPfa %':>11}   c1, c2, c3")
    for n, K in ((4, 12), (4, 16), (4, 20), (5, 15), (5, 20), (5, 25)):
        f = fit_threshold_approx(n, K)
        print(f"  {n:2d} {K:3d} {100 * f.minimax_rel_err:10.5f} {100 * f.max_pfa_rel_err:11.5f}   "
              + ", ".join(f"{c:.12f}" for c in f.c))


if __name__ == "__main__":
    main()
