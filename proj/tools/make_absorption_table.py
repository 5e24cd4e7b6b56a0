#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Generate the sample absorption table shipped in data/absorption_sample.csv.

This is an illustrative humid-air profile (sea level, ~27 C, 50 % RH), not a
line-by-line computation: a quadratic continuum plus Lorentzian lines at the
strong O2 / H2O resonances between 100 and 450 GHz, with peak heights chosen
to match the usual order of magnitude in dB/km. Replace the table with
measured or HITRAN-derived data for quantitative work.
"""
import argparse
import math

# (centre GHz, peak dB/km, half width GHz)
LINES = [
    (118.75, 1.5, 1.2),
    (183.31, 35.0, 3.0),
    (325.15, 45.0, 3.0),
    (380.20, 280.0, 3.5),
    (439.15, 15.0, 3.0),
    (443.02, 10.0, 3.0),
    (448.00, 220.0, 3.5),
]
CONTINUUM_DB_PER_KM_AT_100GHZ = 0.4
DB_PER_KM_TO_PER_M = math.log(10.0) / 10.0 / 1000.0


def k_per_m(f_ghz: float) -> float:
    db_km = CONTINUUM_DB_PER_KM_AT_100GHZ * (f_ghz / 100.0) ** 2
    for f0, peak, width in LINES:
        db_km += peak * width**2 / ((f_ghz - f0) ** 2 + width**2)
    return db_km * DB_PER_KM_TO_PER_M


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--start-ghz", type=float, default=100.0)
    ap.add_argument("--stop-ghz", type=float, default=450.0)
    ap.add_argument("--step-ghz", type=float, default=0.5)
    ap.add_argument("--output", default="data/absorption_sample.csv")
    args = ap.parse_args()

    n = int(round((args.stop_ghz - args.start_ghz) / args.step_ghz)) + 1
    with open(args.output, "w", encoding="ascii") as out:
        out.write("frequency_hz,k_per_m\n")
        for i in range(n):
            f = args.start_ghz + i * args.step_ghz
            out.write(f"{f * 1e9:.6e},{k_per_m(f):.6e}\n")


if __name__ == "__main__":
    main()
