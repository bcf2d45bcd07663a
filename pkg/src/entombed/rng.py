"""SplitMix64 bit stream used for every random decision during generation."""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """Deterministic 64-bit generator.

    ``next_bit`` returns the lowest-order bit of the next 64-bit word, so one
    word is consumed per random decision.  ``draws`` counts consumed words.
    """

    __slots__ = ("state", "draws")

    def __init__(self, seed: int = 0):
        self.state = seed & MASK64
        self.draws = 0

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        self.draws += 1
        return z ^ (z >> 31)

    def next_bit(self) -> int:
        return self.next_u64() & 1

    def __repr__(self):
        return f"SplitMix64(state={self.state:#018x}, draws={self.draws})"
