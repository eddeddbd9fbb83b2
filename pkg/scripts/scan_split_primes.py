#!/usr/bin/env python3
"""Scan for degree-one primes of norm above a bound in a bundled field.

These are the primes at which the representative floor is guaranteed to give
finite expansions once the norm clears the c(M,K) threshold.

Usage: python scripts/scan_split_primes.py [field.json] [bound] [count]
"""
from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from padiccf.fieldspec import load_bundled, load_field_file  # noqa: E402
from padiccf.ideals import degree_one_primes_above, principal_generator  # noqa: E402


def main() -> None:
    name = sys.argv[1] if len(sys.argv) > 1 else "qsqrt14.json"
    bound = int(sys.argv[2]) if len(sys.argv) > 2 else 48896
    count = int(sys.argv[3]) if len(sys.argv) > 3 else 5
    path = Path(name)
    lf = load_field_file(path) if path.exists() else load_bundled(name)
    print(f"# degree-one primes of {lf.label} with norm > {bound}")
    for q in degree_one_primes_above(lf.field, bound, count):
        gamma = principal_generator(q, lf.units)
        print(f"p = {q.p:>8}  gen2 = {[str(c) for c in q.gen2.coords]}  "
              f"gamma = {[str(c) for c in gamma.coords]}  |N(gamma)| = {abs(gamma.norm())}")


if __name__ == "__main__":
    main()
