"""Truncated leafwise cohomology of linear foliations: growth versus saturation.

    python demos/cohomology_dichotomy.py

A rational slope has resonant modes on a whole line of the lattice, so the
truncated dim H^1(K) grows with the cutoff.  For (1, sqrt 2) only the zero
mode resonates and the column stays at 1.  The small-divisor minimum shows
how close the irrational direction comes to resonance at each cutoff.
"""

from presym import cohomology as co

CUTOFFS = [1, 2, 4, 8, 16, 32]
DIRECTIONS = {
    "(1, 1/2)": ["1", "1/2"],
    "(1, sqrt 2)": ["1", "sqrt(2)"],
    "(1, sqrt 2, sqrt 3)": ["1", "sqrt(2)", "sqrt(3)"],
    "(1, 1/2, 1/3)": ["1", "1/2", "1/3"],
}


def run():
    for label, v in DIRECTIONS.items():
        cuts = CUTOFFS if len(v) == 2 else CUTOFFS[:4]
        les = co.les_consistency(v, cuts)
        print(f"{label}: H^1(K) {les['h1k_growth']}, H^2_hor {les['h2hor_growth']}, "
              f"LES discrepancies {les['total_discrepancies']}")
        print("  cutoff  H1M  H1K  H2hor  H2M  min|m.v|")
        for r in les["rows"]:
            print(f"  {r['cutoff']:6d} {r['dim_H1M']:4d} {r['dim_H1K']:4d} {r['dim_H2hor']:6d} {r['dim_H2M']:4d}  {r['min_raw']:.3e}")
        if len(v) == 3:
            print(f"  growth exponent of H^1(K): {co.growth_exponent(cuts, [r['dim_H1K'] for r in les['rows']]):.2f}")


if __name__ == "__main__":
    run()
