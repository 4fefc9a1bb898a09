"""Exact scalar tower: Q, Q(i), and rational quaternions.

Every coefficient in the library is one of these; there is no floating point.
Real parameters (e.g. induction characters) travel as Fractions or Fraction
vectors.  Conjugation is the identity on Q, complex conjugation on Q(i), and
full quaternionic conjugation on QH; in all three cases it is an involutive
anti-automorphism.
"""

from fractions import Fraction

RATIONAL = "Q"
GAUSSIAN = "Qi"
QUATERNION = "QH"

RINGS = (RATIONAL, GAUSSIAN, QUATERNION)


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("not an exact rational: %r" % (x,))


class GaussianRational:
    """a + b*i with exact rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__truediv__(self)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return "GaussianRational(%r, %r)" % (str(self.re), str(self.im))

    def __str__(self):
        return format_scalar(self)


I = GaussianRational(0, 1)


class RationalQuaternion:
    """a + b*i + c*j + d*k with exact rational components.

    Multiplication is non-commutative; conjugation reverses products.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))
        object.__setattr__(self, "c", _frac(c))
        object.__setattr__(self, "d", _frac(d))

    def __setattr__(self, *x):
        raise AttributeError("immutable")

    def _coerce(self, other):
        if isinstance(other, RationalQuaternion):
            return other
        if isinstance(other, GaussianRational):
            return RationalQuaternion(other.re, other.im, 0, 0)
        if isinstance(other, (int, Fraction)):
            return RationalQuaternion(other, 0, 0, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalQuaternion(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalQuaternion(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__sub__(self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return RationalQuaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__mul__(self)

    def norm(self):
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def conjugate(self):
        return RationalQuaternion(self.a, -self.b, -self.c, -self.d)

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in QH")
        c = self.conjugate()
        return RationalQuaternion(c.a / n, c.b / n, c.c / n, c.d / n)

    def __truediv__(self, other):
        # right division: self * other^{-1}
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return RationalQuaternion(-self.a, -self.b, -self.c, -self.d)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (o.a, o.b, o.c, o.d)

    def __hash__(self):
        if self.c == 0 and self.d == 0:
            return hash(GaussianRational(self.a, self.b))
        return hash((self.a, self.b, self.c, self.d))

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    def __repr__(self):
        return "RationalQuaternion(%s, %s, %s, %s)" % (self.a, self.b, self.c, self.d)

    def __str__(self):
        return format_scalar(self)

    def complex_pair(self):
        """q = z + w*j with z, w in Q(i)."""
        return GaussianRational(self.a, self.b), GaussianRational(self.c, self.d)


def complex_realization(q):
    """2x2 Q(i) matrix [[z, w], [-conj(w), conj(z)]] for q = z + w*j.

    The map is an injective ring homomorphism, so traces and characteristic
    data of quaternionic operators can be computed on the complex side.
    """
    q = RationalQuaternion(q.a, q.b, q.c, q.d) if isinstance(q, RationalQuaternion) else as_quaternion(q)
    z, w = q.complex_pair()
    return [[z, w], [-w.conjugate(), z.conjugate()]]


# -- ring-generic helpers ----------------------------------------------------


def ring_of(x):
    if isinstance(x, (int, Fraction)):
        return RATIONAL
    if isinstance(x, GaussianRational):
        return GAUSSIAN
    if isinstance(x, RationalQuaternion):
        return QUATERNION
    raise TypeError("not a supported scalar: %r" % (x,))


def ring_join(*rings):
    order = {RATIONAL: 0, GAUSSIAN: 1, QUATERNION: 2}
    best = RATIONAL
    for r in rings:
        if r not in order:
            raise ValueError("unknown ring tag: %r" % (r,))
        if order[r] > order[best]:
            best = r
    return best


def coerce_to(x, ring):
    """Embed x into the given ring; error if x does not embed."""
    r = ring_of(x)
    if r == ring:
        return x if not isinstance(x, int) else Fraction(x)
    if ring == RATIONAL:
        if r == GAUSSIAN and x.im == 0:
            return x.re
        if r == QUATERNION and x.b == 0 and x.c == 0 and x.d == 0:
            return x.a
        raise ValueError("scalar %s does not embed in Q" % (x,))
    if ring == GAUSSIAN:
        if r == RATIONAL:
            return GaussianRational(x, 0)
        if r == QUATERNION and x.c == 0 and x.d == 0:
            return GaussianRational(x.a, x.b)
        raise ValueError("scalar %s does not embed in Q(i)" % (x,))
    if ring == QUATERNION:
        if r == RATIONAL:
            return RationalQuaternion(x, 0, 0, 0)
        return RationalQuaternion(x.re, x.im, 0, 0)
    raise ValueError("unknown ring tag: %r" % (ring,))


def as_gaussian(x):
    return coerce_to(x, GAUSSIAN)


def as_quaternion(x):
    return coerce_to(x, QUATERNION)


def conj(x):
    if isinstance(x, (int, Fraction)):
        return x
    return x.conjugate()


def zero(ring=RATIONAL):
    return coerce_to(Fraction(0), ring)


def one(ring=RATIONAL):
    return coerce_to(Fraction(1), ring)


# -- textual form ------------------------------------------------------------
#
# Canonical forms:  0, 1, -2/3, i, -i, 2i, 1+i, 3/4-2/5i, 1+2i+3j+4k.
# Exactly what parse_scalar accepts; format_scalar(parse_scalar(s)) is
# canonical and parse(format(x)) == x.


def _fmt_frac(f):
    return str(f)


def _fmt_part(coeff, unit, lead):
    # one summand, e.g. "+3/4i" / "-i" / leading "2/3"
    if coeff == 0:
        return ""
    sign = "-" if coeff < 0 else ("" if lead else "+")
    mag = -coeff if coeff < 0 else coeff
    if unit and mag == 1:
        return sign + unit
    return sign + _fmt_frac(mag) + unit


def format_scalar(x):
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return _fmt_frac(x)
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return _fmt_frac(x.re)
        parts = []
        if x.re != 0:
            parts.append(_fmt_part(x.re, "", True))
        parts.append(_fmt_part(x.im, "i", not parts))
        return "".join(parts)
    if isinstance(x, RationalQuaternion):
        if x.c == 0 and x.d == 0:
            return format_scalar(GaussianRational(x.a, x.b))
        parts = []
        for coeff, unit in ((x.a, ""), (x.b, "i"), (x.c, "j"), (x.d, "k")):
            piece = _fmt_part(coeff, unit, not parts)
            if piece:
                parts.append(piece)
        return "".join(parts) if parts else "0"
    raise TypeError("not a scalar: %r" % (x,))


_UNIT_VALUES = {"": "a", "i": "b", "j": "c", "k": "d"}


def parse_scalar(text, ring=None):
    """Parse the canonical textual form; optionally coerce into `ring`."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar literal")
    comps = {"a": Fraction(0), "b": Fraction(0), "c": Fraction(0), "d": Fraction(0)}
    seen_units = set()
    i = 0
    while i < len(s):
        sign = 1
        if s[i] == "+":
            i += 1
        elif s[i] == "-":
            sign = -1
            i += 1
        j = i
        while j < len(s) and (s[j].isdigit() or s[j] == "/"):
            j += 1
        num = s[i:j]
        unit = ""
        if j < len(s) and s[j] in "ijk":
            unit = s[j]
            j += 1
        if not num and not unit:
            raise ValueError("bad scalar literal: %r" % (text,))
        try:
            coeff = Fraction(num) if num else Fraction(1)
        except (ValueError, ZeroDivisionError):
            raise ValueError("bad scalar literal: %r" % (text,)) from None
        key = _UNIT_VALUES[unit]
        if key in seen_units:
            raise ValueError("repeated %s component in %r" % (unit or "real", text))
        seen_units.add(key)
        comps[key] += sign * coeff
        i = j
    if comps["c"] or comps["d"]:
        val = RationalQuaternion(comps["a"], comps["b"], comps["c"], comps["d"])
    elif comps["b"]:
        val = GaussianRational(comps["a"], comps["b"])
    else:
        val = comps["a"]
    if ring is not None:
        val = coerce_to(val, ring)
    return val
