"""Pure-Python elementary closure kernel.

State is an index ``(a, K) -> mask of b`` holding every stored statement
``a ⟂ b | K`` of one context stratum.  Rules only relate statements that
share their first element, so each rule is a handful of index probes.
"""
from .errors import BudgetExhausted


def _iter_bits(m):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


class Closer:
    """Worklist closure under ci0-1 (+ci2, +ci3 by level).

    ``symmetric=False`` drops ci0 and applies the primed rules (the same
    rules with the second element held fixed) instead.
    """

    MAX_INDEX = None

    def __init__(self, level, symmetric=True):
        self.level = int(level)
        self.symmetric = bool(symmetric)
        self._fwd = {}
        self._rev = None if symmetric else {}
        self._queue = []
        self._count = 0

    def __len__(self):
        return self._count

    def add(self, i, j, K):
        key = (i, K)
        m = self._fwd.get(key, 0)
        b = 1 << j
        if m & b:
            return False
        self._fwd[key] = m | b
        if self._rev is not None:
            rkey = (j, K)
            self._rev[rkey] = self._rev.get(rkey, 0) | (1 << i)
        self._queue.append((i, j, K))
        self._count += 1
        return True

    def _add_transposed(self, a, b, K):
        return self.add(b, a, K)

    def contains(self, i, j, K):
        return (self._fwd.get((i, K), 0) >> j) & 1 == 1

    def run(self, budget=None):
        steps = 0
        queue = self._queue
        while queue:
            if budget is not None and steps >= budget:
                raise BudgetExhausted(f"closure stopped after {steps} steps")
            i, j, K = queue.pop()
            steps += 1
            if self.symmetric:
                self.add(j, i, K)
                self._rules(i, j, K, self._fwd, self.add)
            else:
                self._rules(i, j, K, self._fwd, self.add)
                self._rules(j, i, K, self._rev, self._add_transposed)
        return steps

    def _rules(self, a, b, K, idx, put):
        get = idx.get
        bb = 1 << b
        level = self.level
        for k in _iter_bits(K):
            bk = 1 << k
            L = K ^ bk
            # ci1, t as the first premise a ⟂ b | kL with partner a ⟂ k | L
            if (get((a, L), 0) >> k) & 1:
                put(a, k, L | bb)
                put(a, b, L)
            # ci2: a ⟂ b | kL and a ⟂ k | bL
            if level >= 2 and (get((a, L | bb), 0) >> k) & 1:
                put(a, b, L)
                put(a, k, L)
        # ci1, t as the second premise a ⟂ b | K with partners a ⟂ j | bK
        for j in _iter_bits(get((a, K | bb), 0)):
            put(a, b, K | (1 << j))
            put(a, j, K)
        if level >= 3:
            for k in _iter_bits(get((a, K), 0) & ~bb):
                put(a, b, K | (1 << k))
                put(a, k, K | bb)

    def triplets(self):
        out = []
        for (i, K), m in self._fwd.items():
            for j in _iter_bits(m):
                out.append((i, j, K))
        return out
