import numpy as np

from dmvr.rng import RandomStream


def test_sequence_independent_of_block_size():
    a = RandomStream(11, block_size=7)
    b = RandomStream(11, block_size=1 << 16)
    xa = [a.random() for _ in range(100)]
    xb = [b.random() for _ in range(100)]
    assert xa == xb
    ref = np.random.Generator(np.random.PCG64(11)).random(100)
    assert xa == list(ref)


def test_views_and_scalar_draws_interleave():
    a = RandomStream(5, block_size=10)
    b = RandomStream(5, block_size=10)
    seq = [b.random() for _ in range(40)]
    got = [a.random(), a.random()]
    buf, pos = a.view(15)
    got += list(buf[pos:pos + 15])
    a.seek(pos + 15)
    got += [a.random() for _ in range(23)]
    assert got == seq
    assert a.consumed == 40


def test_index_bounds():
    r = RandomStream(0)
    assert all(0 <= r.index(3) < 3 for _ in range(1000))
