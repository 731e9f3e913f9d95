"""Smoke test for the `sumset` extension module.

Build and install it first, e.g. `pip install maturin` then
`maturin develop --release -m crates/py/Cargo.toml`, or copy the built
library next to this file as `sumset.so`.
"""

import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import sumset  # noqa: E402


def main():
    evens = sumset.WindowSet.generate("periodic:2:0", 10_000)
    assert len(evens) == 5_000 and 2 in evens and 3 not in evens
    assert evens.members()[:3] == [2, 4, 6]

    report = sumset.density_report(evens)
    assert report["banach_estimate"]["density"]["exact"] == "1/2"

    blocks, summary = sumset.block_transform(evens, 2)
    assert len(blocks) == summary["block_count"] == blocks.window_len

    fat = sumset.fatten(evens, 0.1)
    assert fat["outcome"] == "found" and fat["result"]["n"] == 2

    assert sumset.verify_bc(evens, [2, 4], [2, 4])["verified"]
    bad = sumset.verify_bc(evens, [1], [2])
    assert bad["violations"] == [{"b": 1, "c": 2, "sum": 3}]

    assert sumset.autocorrelation(evens, 4) == Fraction(1, 2)
    mix = sumset.mixing_report(evens, 100)
    assert mix["classification"] == "structured"

    dense = sumset.WindowSet.generate("bernoulli:0.8", 200_000, seed=3)
    cert = sumset.find_bc(dense, 8)
    assert cert["status"] == "verified", cert["status"]
    recheck = sumset.verify_bc(dense, cert["b"], cert["c"])
    assert recheck["verified"]

    shift = sumset.one_shift(evens, 3)
    assert shift["status"] == "verified" and shift["k"] == 0

    same = sumset.WindowSet.parse(evens.to_text(rle=True))
    assert same == evens

    try:
        sumset.WindowSet(10, [11])
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-window member accepted")

    print("sumset smoke test passed")


if __name__ == "__main__":
    main()
