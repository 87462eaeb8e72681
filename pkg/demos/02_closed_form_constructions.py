"""The two closed-form constructions, side by side over the target rank.

alg1 spends its first row on the discriminant direction and fills the rest
with covariance-contrast directions; alg2 keeps the r best one-dimensional
divergences in the class-1 whitened frame.  Both are compared against the
classical baselines (Fisher direction, mean-plus-principal-components) and
against the full divergence they are chasing.
"""

import argparse

from klproj import kld, random_class_params, sweep_r


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--d", type=int, default=10)
    args = ap.parse_args()

    p1 = random_class_params(args.d, 0.1, 10.0, 1.0, args.seed)
    p2 = random_class_params(args.d, 0.1, 10.0, 1.0, args.seed + 1)
    full = kld(p1, p2)

    table = sweep_r(p1, p2, ["alg1", "alg2", "lda", "lol"], range(1, args.d + 1))
    by_key = {(m, r): v for m, r, v in table.rows}
    methods = ["alg1", "alg2", "lda", "lol"]

    print(f"d = {args.d}, seed = {args.seed}, full divergence = {full:.4f}")
    print()
    header = "  r " + "".join(f"{m:>12}" for m in methods)
    print(header)
    print("  " + "-" * (len(header) - 2))
    for r in range(1, args.d + 1):
        cells = []
        for m in methods:
            v = by_key.get((m, r))
            cells.append(f"{v:>12.4f}" if v is not None else f"{'-':>12}")
        print(f"{r:>3} " + "".join(cells))
    print()
    print("fractions of the full divergence at r = 1 and r = 3:")
    for r in (1, 3):
        parts = ", ".join(
            f"{m} {by_key[(m, r)] / full:.1%}" for m in ("alg1", "alg2", "lol")
        )
        print(f"  r={r}: {parts}")


if __name__ == "__main__":
    main()
