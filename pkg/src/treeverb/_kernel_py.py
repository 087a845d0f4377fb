"""Pure-Python portrait kernel; same interface as the compiled ``_kernel``.

An element of G_n is a ``bytes`` object holding one native ``uint16`` per
vertex of levels ``0..n-1`` (level order, children of vertex ``p`` at
``d*p+1 .. d*p+d``); each entry indexes Sym(d) in lexicographic order.
"""
from __future__ import annotations

from array import array


class PortraitKernel:
    def __init__(self, d: int, n: int, mul_table, inv_table, img_table):
        self.d = d
        self.n = n
        self.size = (d ** n - 1) // (d - 1) if n else 0
        self.inner = (d ** (n - 1) - 1) // (d - 1) if n else 0
        self.nperm = len(inv_table)
        self._mul = [list(row) for row in mul_table]
        self._inv = list(inv_table)
        self._img = [list(row) for row in img_table]

    def _positions(self, xv) -> list[int]:
        d = self.d
        img = self._img
        pos = [0] * self.size
        for p in range(self.inner):
            base = d * pos[p] + 1
            row = img[xv[p]]
            q = d * p + 1
            for i in range(d):
                pos[q + i] = base + row[i]
        return pos

    def mul(self, x: bytes, y: bytes) -> bytes:
        xv = memoryview(x).cast("H")
        yv = memoryview(y).cast("H")
        pos = self._positions(xv)
        mul = self._mul
        return array("H", [mul[xv[p]][yv[pos[p]]] for p in range(self.size)]).tobytes()

    def inv(self, x: bytes) -> bytes:
        xv = memoryview(x).cast("H")
        pos = self._positions(xv)
        inv = self._inv
        out = array("H", bytes(2 * self.size))
        for p in range(self.size):
            out[pos[p]] = inv[xv[p]]
        return out.tobytes()

    def power(self, x: bytes, m: int) -> bytes:
        if m < 0:
            x, m = self.inv(x), -m
        result = bytes(2 * self.size)
        base = x
        while m:
            if m & 1:
                result = self.mul(result, base)
            m >>= 1
            if m:
                base = self.mul(base, base)
        return result

    def conj(self, x: bytes, c: bytes) -> bytes:
        return self.mul(self.mul(self.inv(c), x), c)

    def expand(self, seen: set, elems: list, lo: int, hi: int, gens: list, limit: int) -> None:
        """Right-multiply ``elems[lo:hi]`` by ``gens``, appending unseen products.

        ``hi < 0`` keeps going over newly appended elements until closed.
        """
        mul = self.mul
        i = lo
        while i < (len(elems) if hi < 0 else hi):
            e = elems[i]
            for g in gens:
                p = mul(e, g)
                if p not in seen:
                    if len(elems) >= limit:
                        raise MemoryError(f"closure exceeds {limit} elements")
                    seen.add(p)
                    elems.append(p)
            i += 1

    def conjugacy_class(self, x: bytes, elems: list) -> set:
        mul, inv = self.mul, self.inv
        return {mul(mul(inv(c), x), c) for c in elems}

    def left_mul_all(self, x: bytes, elems) -> list:
        mul = self.mul
        return [mul(x, e) for e in elems]
