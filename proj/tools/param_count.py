#!/usr/bin/env python3
# Copyright 2026 The radarnet Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Hand count of trainable parameters, written from the layer table.

Every encoder conv is bias-free and followed by batch norm (gamma, beta).
Heads are biased transposed convolutions; the free-space skip is a biased
1x1 conv. Prints the total that tests/unit/model_test.cpp pins.
"""

import argparse


def conv_bn(cin, cout, k):
    return cin * cout * k * k + 2 * cout


def deconv(cin, cout, k):
    return cin * cout * k * k + cout


def count(base, in_ch=5, classes=4, reg=6, fs=2):
    rows = [("1", conv_bn(in_ch, base, 7))]
    widths = [("2a", 1, 1), ("2b", 1, 1), ("3a", 1, 1), ("3b", 1, 1),
              ("4a", 1, 2), ("4b", 2, 2), ("4c", 2, 2), ("4d", 2, 2),
              ("5a", 2, 4), ("5b", 4, 4), ("5c", 4, 4), ("5d", 4, 4),
              ("6a", 4, 8), ("6b", 8, 8), ("6c", 8, 8), ("6d", 8, 8)]
    rows += [(n, conv_bn(i * base, o * base, 3)) for n, i, o in widths]
    rows += [
        ("class_output", deconv(8 * base, classes, 4)),
        ("regression_output", deconv(8 * base, reg, 4)),
        ("freespace_up1", deconv(8 * base, base, 4)),
        ("freespace_output", deconv(base, fs, 4)),
        ("freespace_skip", base * fs + fs),
    ]
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--base", type=int, default=64)
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()
    rows = count(args.base)
    if args.verbose:
        for name, n in rows:
            print(f"{name:>18} {n:>10}")
    print(sum(n for _, n in rows))


if __name__ == "__main__":
    main()
