#!/usr/bin/env python3
# Regenerates the golden fixture files in this directory. The files are
# committed; the tests only read them. Written without the library so that a
# bug in its encoders cannot leak into the expected bytes.
import struct
from pathlib import Path

HERE = Path(__file__).resolve().parent
MASK = (1 << 64) - 1


def splitmix64(seed, count):
    state = seed
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        out.append(z ^ (z >> 31))
    return out


def fnv1a64(data):
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & MASK
    return h


def dabw(records):
    out = b"DABW" + struct.pack("<II", 1, len(records))
    for name, dims, values in records:
        raw = name.encode("utf-8")
        out += struct.pack("<H", len(raw)) + raw
        out += struct.pack("<BB", 0, len(dims))
        out += struct.pack("<%dI" % len(dims), *dims)
        out += struct.pack("<%df" % len(values), *values)
    return out


def main():
    with open(HERE / "rng_seed0.txt", "w") as f:
        for v in splitmix64(0, 8):
            f.write("%016x\n" % v)

    # Stored shapes are always 4-D; the 1-D record exercises reader padding.
    stored = dabw([
        ("conv.weight", (2, 1, 1, 3), [0.5, -1.0, 2.0, 0.0, -0.0, 3.25]),
        ("bn.gamma", (3, 1, 1, 1), [1.0, 0.125, -7.5]),
    ])
    short = dabw([("bias", (2,), [1.5, -2.5])])
    tns = b"TNS1" + struct.pack("<4I", 1, 2, 2, 2) + struct.pack("<8f", *[i * 0.25 - 1.0 for i in range(8)])
    pgm = b"P5\n# fixture\n4 3\n255\n" + bytes([0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 255])
    ppm = b"P6\n2 1\n255\n" + bytes([255, 0, 0, 0, 128, 255])

    files = {
        "golden.dabw": stored,
        "golden_1d.dabw": short,
        "golden.tns": tns,
        "golden.pgm": pgm,
        "golden.ppm": ppm,
    }
    with open(HERE / "checksums.txt", "w") as f:
        for name, data in files.items():
            (HERE / name).write_bytes(data)
            f.write("%s %016x\n" % (name, fnv1a64(data)))


if __name__ == "__main__":
    main()
