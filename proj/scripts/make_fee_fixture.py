#!/usr/bin/env python3
"""Writes data/fees_synthetic.csv: 1000 per-transaction fees (BTC) in which
exactly 778 are below 0.0001 and exactly 985 are below 0.0005."""
import math
import random
from pathlib import Path

rng = random.Random(627195)


def log_uniform(lo, hi):
    while True:
        x = round(10 ** rng.uniform(math.log10(lo), math.log10(hi)), 8)
        if lo <= x < hi:
            return x


fees = ([log_uniform(1e-6, 1e-4) for _ in range(778)]
        + [log_uniform(1e-4, 5e-4) for _ in range(985 - 778)]
        + [log_uniform(5e-4, 5e-2) for _ in range(1000 - 985)])
rng.shuffle(fees)
heights = sorted(rng.randint(627195, 627894) for _ in fees)

out = Path(__file__).resolve().parent.parent / "data" / "fees_synthetic.csv"
with out.open("w") as f:
    f.write("# synthetic per-transaction fees in BTC, blocks 627195-627894\n")
    f.write("# 778/1000 below 0.0001 BTC, 985/1000 below 0.0005 BTC\n")
    for h, fee in zip(heights, fees):
        f.write(f"{h},{fee:.8f}\n")
