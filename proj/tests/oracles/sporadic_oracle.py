#!/usr/bin/env python3
"""Independent recomputation of the sporadic row checks and minimal lengths.

Group orders of the constituents come from the standard order formulas for
the classical and exceptional groups of Lie type, not from the library's
table. Run with the path of the mlsig binary; the script compares its own
results with `mlsig table-check --json` and `mlsig lengths --json` and exits
non-zero on any difference.
"""

import json
import math
import subprocess
import sys
from math import prod


def power_product(s):
    v = 1
    for part in s.split("."):
        b, _, e = part.partition("^")
        v *= int(b) ** (int(e) if e else 1)
    return v


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factor(n):
    f = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            f[d] = f.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        f[n] = f.get(n, 0) + 1
    return f


def psu(n, q):
    o = q ** (n * (n - 1) // 2) * prod(q**i - (-1) ** i for i in range(2, n + 1))
    return o // math.gcd(n, q + 1)


def psl(n, q):
    return q ** (n * (n - 1) // 2) * prod(q**i - 1 for i in range(2, n + 1)) // math.gcd(n, q - 1)


def g2(q):
    return q**6 * (q**6 - 1) * (q**2 - 1)


def triality_d4(q):
    return q**12 * (q**8 + q**4 + 1) * (q**6 - 1) * (q**2 - 1)


def twisted_e6(q):
    o = q**36 * (q**12 - 1) * (q**9 + 1) * (q**8 - 1) * (q**6 - 1) * (q**5 + 1) * (q**2 - 1)
    return o // math.gcd(3, q + 1)


def mathieu(n):
    return {22: 443520, 24: 244823040}[n]


SPORADIC = {
    "Co0": "2^22.3^9.5^4.7^2.11.13.23",
    "Co1": "2^21.3^9.5^4.7^2.11.13.23",
    "Co2": "2^18.3^6.5^3.7.11.23",
    "Co3": "2^10.3^7.5^3.7.11.23",
    "Fi22": "2^17.3^9.5^2.7.11.13",
    "Fi23": "2^18.3^13.5^2.7.11.13.17.23",
    "Fi24'": "2^21.3^16.5^2.7^3.11.13.17.23.29",
    "M": "2^46.3^20.5^9.7^6.11^2.13^3.17.19.23.29.31.41.47.59.71",
    "B": "2^41.3^13.5^6.7^2.11.13.17.19.23.31.47",
    "Th": "2^15.3^10.5^3.7^2.13.19.31",
    "HN": "2^14.3^6.5^6.7.11.19",
    "He": "2^10.3^3.5^2.7^3.17",
    "O'N": "2^9.3^4.5.7^3.11.19.31",
    "Ly": "2^8.3^7.5^6.11.31.37.67",
    "J3": "2^7.3^5.5.17.19",
    "J4": "2^21.3^3.5.7.11^3.23.29.31.37.43",
}

NAMED = {
    "M22": mathieu(22),
    "M24": mathieu(24),
    "A6": math.factorial(6) // 2,
    "A12": math.factorial(12) // 2,
    "PSU6(2)": psu(6, 2),
    "PSL3(7)": psl(3, 7),
    "G2(5)": g2(5),
    "3D4(2)": triality_d4(2),
    "2E6(2)": twisted_e6(2),
    "Fi22": power_product(SPORADIC["Fi22"]),
    "Fi23": power_product(SPORADIC["Fi23"]),
    "B": power_product(SPORADIC["B"]),
}

# group, stabilizer constituents, decimal index (or None), index factorization, block orders
ROWS = [
    ("Co1", ["2^11", "M24"], "8292375", "3^6.5^3.7.13", ["3^6", "5^3", "7", "13"]),
    ("Co2", ["2^10", "M22", "2"], "46575", "3^4.5^2.23", ["3^4", "5^2", "23"]),
    ("Fi22", ["2", "PSU6(2)"], "3510", "2.3^3.5.13", ["2", "3^5", "5", "13"]),
    ("Fi23", ["2", "Fi22"], "31671", "3^4.17.23", ["3^4", "17", "23"]),
    ("Fi24'", ["Fi23"], "306936", "2^3.3^3.7^2.29", ["2^3", "3^3", "7^2", "29"]),
    ("Th", ["3D4(2)", "3"], "143127000", "2^3.3^5.5^3.7.19.31", ["2^3", "3^5", "5^3", "7", "19", "31"]),
    ("HN", ["A12"], "1140000", "2^6.3.5^5.19", ["2^6", "3", "5^5", "19"]),
    ("B", ["2", "2E6(2)", "2"], "13571955000", "2^3.3^4.5^4.23.31.47", ["2^3", "3^4", "5^4", "23", "31", "47"]),
    ("M", ["2", "B"], None, "2^5.3^7.5^3.11.13^2.41.59.71", ["2^5", "3^7", "5^3", "11", "13^2", "41", "59", "71"]),
    ("O'N", ["PSL3(7)", "2"], "122760", "2^2.3^2.11.31", ["2^2", "3^2", "11", "31"]),
    ("Ly", ["G2(5)"], "8835156", "2^2.3^4.11.37.67", ["2^2", "3^4", "11", "37", "67"]),
    ("J3", ["3", "3", "A6", "2"], "23256", "2^2.3^2.17.19", ["2^2", "3^2", "17", "19"]),
    ("J4", ["2^11", "M24"], "173067389", "11^2.29.31.37.43", ["11^2", "29", "31", "37", "43"]),
]


def well_formed(s):
    bases = [int(p.partition("^")[0]) for p in s.split(".")]
    return all(is_prime(b) for b in bases) and bases == sorted(set(bases))


def expected_rows():
    out = {}
    for group, stab, idx, ifac, blocks in ROWS:
        order = power_product(SPORADIC[group])
        s = prod(NAMED[c] if c in NAMED else power_product(c) for c in stab)
        index = int(idx) if idx else power_product(ifac)
        a = power_product(ifac) == index and prod(power_product(x) for x in blocks) == index
        b = index * s == order
        c = well_formed(SPORADIC[group]) and well_formed(ifac) and all("." not in x and well_formed(x) for x in blocks)
        out[group] = (a, b, c, "pass" if a and b and c else "flagged")
    return out


def expected_lengths():
    return {g: sum(p * e for p, e in factor(power_product(o)).items()) for g, o in SPORADIC.items()}


def run(binary, *args):
    p = subprocess.run([binary, *args, "--json"], capture_output=True, text=True)
    return [json.loads(line) for line in p.stdout.splitlines() if line.strip()]


def main():
    if len(sys.argv) != 2:
        print("usage: sporadic_oracle.py PATH_TO_MLSIG", file=sys.stderr)
        return 2
    binary = sys.argv[1]
    bad = 0
    rows = expected_rows()
    got = {r["group"]: r for r in run(binary, "table-check")}
    for group, (a, b, c, verdict) in rows.items():
        r = got.get(group)
        mine = (r["index_consistent"], r["orbit_stabilizer"], r["order_well_formed"], r["verdict"]) if r else None
        ok = mine == (a, b, c, verdict)
        bad += not ok
        print(f"{'ok ' if ok else 'BAD'} {group:6} expected {(a, b, c, verdict)} got {mine}")
    lengths = expected_lengths()
    got = {r["group"]: int(r["minimal_length"]) for r in run(binary, "lengths")}
    for group, n in lengths.items():
        ok = got.get(group) == n
        bad += not ok
        print(f"{'ok ' if ok else 'BAD'} {group:6} minimal length expected {n} got {got.get(group)}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
