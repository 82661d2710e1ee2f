"""Canonicalization time for alternating c/c+ strings of growing length.

    python3 scripts/scaling_benchmark.py --max 18
"""

import argparse
import math

from sqalg.benchmark import time_canonicalization


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--min", type=int, default=8)
    ap.add_argument("--max", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args()
    rows = time_canonicalization(range(args.min, args.max + 1, 2), args.repeat)
    print(f"{'length':>6} {'terms':>8} {'seconds':>10}")
    for n, size, t in rows:
        print(f"{n:>6} {size:>8} {t:>10.4f}")
    # local log-log slope between consecutive lengths, for reference only
    for (n1, _, t1), (n2, _, t2) in zip(rows, rows[1:]):
        if t1 > 0:
            print(f"slope {n1}->{n2}: {math.log(t2 / t1) / math.log(n2 / n1):.2f}")


if __name__ == "__main__":
    main()
