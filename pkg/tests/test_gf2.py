import random

from latticehfi import gf2


def test_rank_and_kernel():
    imgs = [0b011, 0b110, 0b101]
    assert gf2.rank(imgs) == 2
    ker = gf2.kernel(imgs)
    assert len(ker) == 1
    assert gf2.apply(imgs, ker[0]) == 0


def test_echelon_contains():
    e = gf2.Echelon([0b1100, 0b0110])
    assert e.contains(0b1010)
    assert not e.contains(0b0001)
    assert not e.add(0b1010)
    assert e.add(0b0001) and len(e) == 3


def test_rref_reduce_full():
    rows = gf2.rref([0b111, 0b011])
    r = gf2.reduce_full(0b101, rows)
    assert all(not (r >> p & 1) for p in rows)
    assert gf2.reduce_full(0b111 ^ 0b011, rows) == 0


def test_random_rank_nullity():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(1, 12)
        imgs = [rng.getrandbits(8) for _ in range(n)]
        assert gf2.rank(imgs) + len(gf2.kernel(imgs)) == n


def test_bits():
    assert gf2.bits(0b10110) == [1, 2, 4]
