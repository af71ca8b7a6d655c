"""Sparse multivariate polynomials over the rationals.

Just enough ring structure for a deformation base: monomials are exponent
tuples, coefficients are :class:`~fractions.Fraction`, and the arithmetic
interoperates with the bare int/Fraction scalars produced by path
reduction, on either side.  Family entries stay linear in the variables,
so none of this is performance sensitive.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError

__all__ = ["Poly"]


def _scalar(value):
    """Fraction view of an int/Fraction scalar, else None."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    return None


class Poly:
    """Polynomial in ``nvars`` commuting variables x1..x_nvars."""

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars, coeffs=None):
        if not isinstance(nvars, int) or nvars < 0:
            raise InputError("variable count must be a nonnegative integer")
        self.nvars = nvars
        clean = {}
        if coeffs:
            for mono, c in coeffs.items():
                mono = tuple(mono)
                if len(mono) != nvars or any(
                        not isinstance(e, int) or e < 0 for e in mono):
                    raise InputError(f"bad exponent tuple {mono!r}")
                c = Fraction(c)
                if c:
                    clean[mono] = clean.get(mono, Fraction(0)) + c
                    if not clean[mono]:
                        del clean[mono]
        self.coeffs = clean

    @classmethod
    def constant(cls, nvars, value):
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def variable(cls, nvars, i):
        if not (0 <= i < nvars):
            raise InputError(f"variable index {i} out of range")
        mono = tuple(1 if k == i else 0 for k in range(nvars))
        return cls(nvars, {mono: Fraction(1)})

    # ring operations -------------------------------------------------------

    def _coerce(self, other):
        s = _scalar(other)
        if s is not None:
            return Poly.constant(self.nvars, s)
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise InputError("mixed variable counts")
            return other
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.coeffs)
        for mono, c in other.coeffs.items():
            cur = out.get(mono, Fraction(0)) + c
            if cur:
                out[mono] = cur
            else:
                out.pop(mono, None)
        res = Poly(self.nvars)
        res.coeffs = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = Poly(self.nvars)
        res.coeffs = {m: -c for m, c in self.coeffs.items()}
        return res

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                cur = out.get(mono, Fraction(0)) + c1 * c2
                if cur:
                    out[mono] = cur
                else:
                    out.pop(mono, None)
        res = Poly(self.nvars)
        res.coeffs = out
        return res

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.coeffs == other.coeffs
        s = _scalar(other)
        if s is None:
            return NotImplemented
        if not s:
            return not self.coeffs
        return self.coeffs == {(0,) * self.nvars: s}

    def __hash__(self):
        return hash((self.nvars, frozenset(self.coeffs.items())))

    # queries ---------------------------------------------------------------

    def total_degree(self):
        """Largest monomial degree, -1 for the zero polynomial."""
        if not self.coeffs:
            return -1
        return max(sum(m) for m in self.coeffs)

    def constant_term(self) -> Fraction:
        return self.coeffs.get((0,) * self.nvars, Fraction(0))

    def linear_coefficient(self, i) -> Fraction:
        mono = tuple(1 if k == i else 0 for k in range(self.nvars))
        return self.coeffs.get(mono, Fraction(0))

    def variables_used(self):
        out = set()
        for mono in self.coeffs:
            out.update(k for k, e in enumerate(mono) if e)
        return sorted(out)

    def evaluate(self, point) -> Fraction:
        point = tuple(Fraction(x) for x in point)
        if len(point) != self.nvars:
            raise InputError(
                f"point has {len(point)} coordinates, expected {self.nvars}")
        total = Fraction(0)
        for mono, c in self.coeffs.items():
            val = c
            for x, e in zip(point, mono):
                for _ in range(e):
                    val *= x
            total += val
        return total

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for mono in sorted(self.coeffs, key=lambda m: (sum(m), m)):
            c = self.coeffs[mono]
            names = "*".join(
                f"x{k + 1}" + (f"^{e}" if e > 1 else "")
                for k, e in enumerate(mono) if e)
            bits.append(f"{c}*{names}" if names else f"{c}")
        return " + ".join(bits)
