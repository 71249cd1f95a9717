"""Base coefficient rings, their elements, and the ring spec grammar.

Supported rings: Z, Z/m, F_p, Z[1/n], and polynomial rings over these in
one or several variables.  Multivariate polynomial rings are evaluation-only
ambients for monomial quotients; the module calculus (modules.py) restricts
to the Euclidean cases Z, Z/m (by lifting), F_p, and F_p[x].

Element representations are canonical, so == on representations is equality
in the ring:

    Z           int
    Z/m, F_p    int in [0, m)
    Z[1/n]      Fraction whose denominator divides a power of n
    polynomial  dict {exponent tuple: coefficient}, no zero coefficients

The text grammar is  Z | Z/<m> | F<p> | Z[1/<n>] | <base>[<vars>]  with
comma-separated variable names, e.g. "F2[s,t]" or "Z/4[x]".
"""

from fractions import Fraction
from math import gcd
import re

from .linalg import IntOps, ModOps, PolyOps


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin (the fixed witness set is exact below 3.3e24).

    >>> [k for k in range(2, 20) if is_prime(k)]
    [2, 3, 5, 7, 11, 13, 17, 19]
    """
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class BaseRing:
    """Tagged description of a coefficient ring.  Immutable.

    tag is one of "Z", "Zmod", "Fp", "Zinv", "Poly"; the relevant parameter
    fields are set per tag (m, p, n, or coeff+vars).
    """

    __slots__ = ("tag", "m", "p", "n", "coeff", "vars")

    def __init__(self, tag, m=None, p=None, n=None, coeff=None, vars=()):
        self.tag = tag
        self.m = m
        self.p = p
        self.n = n
        self.coeff = coeff
        self.vars = tuple(vars)
        if tag == "Zmod" and m < 2:
            raise ValueError("modulus must be >= 2, got %r" % m)
        if tag == "Fp" and not is_prime(p):
            raise ValueError("F%d: %d is not prime" % (p, p))
        if tag == "Zinv" and n < 2:
            raise ValueError("Z[1/%d]: n must be >= 2" % n)
        if tag == "Poly":
            assert coeff is not None and self.vars
            if len(set(self.vars)) != len(self.vars):
                raise ValueError("repeated variable names %r" % (vars,))

    def __eq__(self, other):
        return (isinstance(other, BaseRing)
                and (self.tag, self.m, self.p, self.n, self.coeff, self.vars)
                == (other.tag, other.m, other.p, other.n, other.coeff, other.vars))

    def __hash__(self):
        return hash((self.tag, self.m, self.p, self.n, self.coeff, self.vars))

    def __repr__(self):
        return "BaseRing(%s)" % print_ring(self)

    # ---- structure ----

    def char(self):
        if self.tag == "Zmod":
            return self.m
        if self.tag == "Fp":
            return self.p
        if self.tag == "Poly":
            return self.coeff.char()
        return 0

    def is_field(self):
        return self.tag == "Fp"

    def euclidean_for_modules(self):
        """Does the module calculus accept this base?  Z/m counts (lifted)."""
        if self.tag in ("Z", "Zmod", "Fp"):
            return True
        return (self.tag == "Poly" and len(self.vars) == 1
                and self.coeff.tag == "Fp")

    def elementwise_ops(self):
        """linalg ops object for entries of this ring, where one exists."""
        if self.tag == "Z":
            return IntOps()
        if self.tag == "Zmod":
            return ModOps(self.m)
        if self.tag == "Fp":
            return ModOps(self.p)
        if self.tag == "Poly" and len(self.vars) == 1 and self.coeff.tag == "Fp":
            return PolyOps(self.coeff.p)
        raise ValueError("no Euclidean element ops for %s" % print_ring(self))

    # ---- elements ----

    def zero(self):
        if self.tag == "Zinv":
            return Fraction(0)
        if self.tag == "Poly":
            return {}
        return 0

    def one(self):
        return self.from_int(1)

    def from_int(self, c):
        if self.tag == "Z":
            return c
        if self.tag in ("Zmod", "Fp"):
            return c % self.char()
        if self.tag == "Zinv":
            return Fraction(c)
        z = (0,) * len(self.vars)
        cc = self.coeff.from_int(c)
        return {} if self.coeff.is_zero(cc) else {z: cc}

    def is_zero(self, a):
        if self.tag == "Poly":
            return not a
        return a == self.zero()

    def add(self, a, b):
        if self.tag == "Z":
            return a + b
        if self.tag in ("Zmod", "Fp"):
            return (a + b) % self.char()
        if self.tag == "Zinv":
            return a + b
        out = dict(a)
        for e, c in b.items():
            s = self.coeff.add(out.get(e, self.coeff.zero()), c)
            if self.coeff.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return out

    def neg(self, a):
        if self.tag == "Z":
            return -a
        if self.tag in ("Zmod", "Fp"):
            return (-a) % self.char()
        if self.tag == "Zinv":
            return -a
        return {e: self.coeff.neg(c) for e, c in a.items()}

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.tag == "Z":
            return a * b
        if self.tag in ("Zmod", "Fp"):
            return (a * b) % self.char()
        if self.tag == "Zinv":
            return a * b
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = self.coeff.add(out.get(e, self.coeff.zero()),
                                   self.coeff.mul(c1, c2))
                if self.coeff.is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return out

    def var_elt(self, name):
        assert self.tag == "Poly" and name in self.vars
        e = tuple(1 if v == name else 0 for v in self.vars)
        return {e: self.coeff.one()}

    # conversions to/from the linalg ops representation (PolyOps tuples)

    def to_ops_elt(self, a):
        if self.tag == "Poly":
            if not a:
                return ()
            top = max(e[0] for e in a)
            return PolyOps(self.coeff.p)._trim(
                [a.get((i,), 0) for i in range(top + 1)])
        if self.tag in ("Zmod", "Fp"):
            return a % self.char()
        return a

    def from_ops_elt(self, a):
        if self.tag == "Poly":
            return {(i,): c % self.coeff.p for i, c in enumerate(a) if c % self.coeff.p}
        if self.tag in ("Zmod", "Fp"):
            return a % self.char()
        return a


def ZZ():
    return BaseRing("Z")


def Zmod(m):
    return BaseRing("Zmod", m=m)


def Fp(p):
    return BaseRing("Fp", p=p)


def Zinv(n):
    return BaseRing("Zinv", n=n)


def poly_ring(coeff, *vars):
    return BaseRing("Poly", coeff=coeff, vars=vars)


# ---------------------------------------------------------------------------
# spec grammar
# ---------------------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


def parse_ring(text):
    """Parse a ring spec.

    >>> parse_ring("Z/12").m
    12
    >>> parse_ring("F7").p
    7
    >>> parse_ring("F4")
    Traceback (most recent call last):
        ...
    ValueError: F4: 4 is not prime
    >>> print_ring(parse_ring("F2[s,t]"))
    'F2[s,t]'
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty ring spec")
    # atom
    if s.startswith("Z/"):
        i = 2
        while i < len(s) and s[i].isdigit():
            i += 1
        if i == 2:
            raise ValueError("malformed ring spec %r" % text)
        ring = Zmod(int(s[2:i]))
        rest = s[i:]
    elif s.startswith("F"):
        i = 1
        while i < len(s) and s[i].isdigit():
            i += 1
        if i == 1:
            raise ValueError("malformed ring spec %r" % text)
        ring = Fp(int(s[1:i]))
        rest = s[i:]
    elif s.startswith("Z"):
        ring = ZZ()
        rest = s[1:]
    else:
        raise ValueError("malformed ring spec %r" % text)
    # bracket groups
    while rest:
        if not rest.startswith("["):
            raise ValueError("malformed ring spec %r" % text)
        close = rest.find("]")
        if close < 0:
            raise ValueError("unbalanced brackets in %r" % text)
        inner = rest[1:close]
        rest = rest[close + 1:]
        if inner.startswith("1/"):
            if ring.tag != "Z":
                raise ValueError("1/n inversion only supported over Z")
            ring = Zinv(int(inner[2:]))
            continue
        names = inner.split(",")
        for nm in names:
            if not _NAME.match(nm):
                raise ValueError("bad variable name %r in %r" % (nm, text))
        ring = poly_ring(ring, *names)
    return ring


def print_ring(ring):
    if ring.tag == "Z":
        return "Z"
    if ring.tag == "Zmod":
        return "Z/%d" % ring.m
    if ring.tag == "Fp":
        return "F%d" % ring.p
    if ring.tag == "Zinv":
        return "Z[1/%d]" % ring.n
    return "%s[%s]" % (print_ring(ring.coeff), ",".join(ring.vars))


# ---------------------------------------------------------------------------
# element text forms
# ---------------------------------------------------------------------------

def print_elt(ring, a):
    """Canonical string for a ring element; parse_elt inverts it.

    >>> R = parse_ring("F2[s,t]")
    >>> x = R.add(R.var_elt("s"), R.mul(R.var_elt("t"), R.var_elt("t")))
    >>> print_elt(R, x)
    't^2 + s'
    """
    if ring.tag in ("Z", "Zmod", "Fp"):
        return str(a)
    if ring.tag == "Zinv":
        return str(a)
    if not a:
        return "0"
    # graded-lex descending: higher total degree first, then lex on exponents
    keys = sorted(a, key=lambda e: (sum(e), e), reverse=True)
    parts = []
    for e in keys:
        c = a[e]
        mono = "*".join(
            v if k == 1 else "%s^%d" % (v, k)
            for v, k in zip(ring.vars, e) if k)
        cs = print_elt(ring.coeff, c)
        if not mono:
            term = cs
        elif cs == "1":
            term = mono
        elif cs == "-1":
            term = "-" + mono
        else:
            term = cs + "*" + mono
        parts.append(term)
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def parse_elt(ring, text):
    """Parse the element format produced by print_elt (plus harmless variants)."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty element")
    if ring.tag == "Z":
        return int(s)
    if ring.tag in ("Zmod", "Fp"):
        return int(s) % ring.char()
    if ring.tag == "Zinv":
        f = Fraction(s)
        d = f.denominator
        while d > 1:
            g = gcd(d, ring.n)
            if g == 1:
                raise ValueError("%s is not in %s" % (text, print_ring(ring)))
            while d % g == 0:
                d //= g
        return f
    # polynomial: split into signed terms at top level (no parens in format)
    terms = []
    i = 0
    cur = ""
    sign = 1
    while i < len(s):
        ch = s[i]
        if ch in "+-" and cur:
            terms.append((sign, cur))
            sign = 1 if ch == "+" else -1
            cur = ""
        elif ch in "+-" and not cur:
            if ch == "-":
                sign = -sign
        else:
            cur += ch
        i += 1
    if cur:
        terms.append((sign, cur))
    out = ring.zero()
    for sign, term in terms:
        coeff = ring.one()
        expo = [0] * len(ring.vars)
        for factor in term.split("*"):
            if not factor:
                raise ValueError("malformed term in %r" % text)
            if factor[0].isdigit():
                coeff = ring.mul(coeff, ring.from_int(int(factor)))
            else:
                if "^" in factor:
                    v, _, k = factor.partition("^")
                    k = int(k)
                else:
                    v, k = factor, 1
                if v not in ring.vars:
                    raise ValueError("unknown variable %r in %r" % (v, text))
                expo[ring.vars.index(v)] += k
        mono = {tuple(expo): ring.coeff.one()}
        if sign < 0:
            coeff = ring.neg(coeff)
        out = ring.add(out, ring.mul(coeff, mono))
    return out


# ---------------------------------------------------------------------------
# ring homomorphisms between base rings
# ---------------------------------------------------------------------------

class RingHom:
    """A homomorphism out of a base ring, checked at construction.

    target_apply: a pair (target ring-like, images dict for source vars).
    For non-polynomial sources the hom is determined by 1 ↦ 1, and the check
    is that the source's defining relation maps to 0 (m·1 = 0 for Z/m, n a
    unit for Z[1/n]).  apply() evaluates on elements.
    """

    def __init__(self, source, target, var_images=None):
        self.source = source
        self.target = target
        self.var_images = dict(var_images or {})
        self._check()

    def _check(self):
        s, t = self.source, self.target
        if s.tag == "Zmod":
            # m·1 must vanish in the target: char(t) | m
            if t.char() == 0 or s.m % t.char() != 0:
                raise ValueError("no ring map %s -> %s" %
                                 (print_ring(s), print_ring(t)))
        if s.tag == "Fp":
            if t.char() != s.p:
                raise ValueError("no ring map %s -> %s" %
                                 (print_ring(s), print_ring(t)))
        if s.tag == "Zinv":
            c = t.char()
            if c != 0 and gcd(s.n, c) != 1:
                raise ValueError("%d not invertible in %s" % (s.n, print_ring(t)))
        if s.tag == "Poly":
            for v in s.vars:
                if v not in self.var_images:
                    raise ValueError("missing image for variable %r" % v)
            RingHom(s.coeff, t)  # coefficient compatibility

    def apply(self, a):
        s, t = self.source, self.target
        if s.tag == "Z":
            return t.from_int(a)
        if s.tag in ("Zmod", "Fp"):
            return t.from_int(a)
        if s.tag == "Zinv":
            num = t.from_int(a.numerator)
            if a.denominator == 1:
                return num
            raise ValueError("denominator images need explicit inverse data")
        out = t.zero()
        for e, c in a.items():
            term = RingHom(s.coeff, t).apply(c)
            for v, k in zip(s.vars, e):
                for _ in range(k):
                    term = t.mul(term, self.var_images[v])
            out = t.add(out, term)
        return out
