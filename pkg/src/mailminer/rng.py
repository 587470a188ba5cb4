"""Deterministic random number generator for sampling, shuffling and k-means init.

A fixed 64-bit linear congruential generator (Knuth's MMIX constants:
state = state * 6364136223846793005 + 1442695040888963407 mod 2^64) so
that every seeded operation is reproducible from the seed alone, with no
dependence on the host language's library RNG.
"""

_MULT = 6364136223846793005
_INC = 1442695040888963407
_MASK = (1 << 64) - 1


class Lcg:
    def __init__(self, seed):
        self.state = seed & _MASK

    def next_u64(self):
        self.state = (self.state * _MULT + _INC) & _MASK
        return self.state

    def below(self, n):
        """Integer in [0, n). Uses the high 53 bits; modulo bias is
        negligible for the small n used here and keeps the stream simple."""
        if n <= 0:
            raise ValueError("n must be positive")
        return (self.next_u64() >> 11) % n

    def shuffle(self, seq):
        """In-place Fisher-Yates shuffle."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def choose(self, n, m):
        """m distinct indices out of range(n), in draw order."""
        idx = list(range(n))
        self.shuffle(idx)
        return idx[:m]
