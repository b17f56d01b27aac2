#!/usr/bin/env python3
"""Independent pure-python implementation of Philox4x32-10 used to freeze
the generator test vectors asserted in the C++ unit tests."""

M0 = 0xD2511F53
M1 = 0xCD9E8D57
W0 = 0x9E3779B9
W1 = 0xBB67AE85
MASK = 0xFFFFFFFF


def mulhilo(a, b):
    prod = (a * b) & 0xFFFFFFFFFFFFFFFF
    return (prod >> 32) & MASK, prod & MASK


def philox4x32(counter, key, rounds=10):
    x = list(counter)
    k = list(key)
    for _ in range(rounds):
        hi0, lo0 = mulhilo(M0, x[0])
        hi1, lo1 = mulhilo(M1, x[2])
        x = [(hi1 ^ x[1] ^ k[0]) & MASK, lo1, (hi0 ^ x[3] ^ k[1]) & MASK, lo0]
        k[0] = (k[0] + W0) & MASK
        k[1] = (k[1] + W1) & MASK
    return x


def show(counter, key):
    out = philox4x32(counter, key)
    print(f"ctr={[hex(c) for c in counter]} key={[hex(c) for c in key]}")
    print("  -> {" + ", ".join(f"0x{v:08x}u" for v in out) + "}")


if __name__ == "__main__":
    show([0, 0, 0, 0], [0, 0])
    show([MASK] * 4, [MASK] * 2)
    show([0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344], [0xA4093822, 0x299F31D0])
    # the stream layout used by the library: counter=(lo(i),hi(i),lo(stream),hi(stream))
    seed = 42
    stream = 7
    ctr = [5 & MASK, 0, stream & MASK, (stream >> 32) & MASK]
    show(ctr, [seed & MASK, (seed >> 32) & MASK])
