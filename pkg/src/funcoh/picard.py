"""Picard groups of monomial subrings via the Milnor conductor square.

A monomial subring is A = sum_{i<c} c_i R0 t^i + t^c R0[t] inside the
normalization R0[t] (optionally tensored with R0[x]): the degree data is a
list of principal coefficient ideals, one per t-degree below the conductor
degree.  Everything downstream is ideal arithmetic on those principal
generators: the conductor of R0[t] into A is computed degreewise, the two
quotients are truncated rings R + N, and when N^2 = 0 the Picard group
comes out of the unit cokernel of the square as an explicit direct sum.

Infinite groups are symbolic descriptors (free ranks, torsion chains, and
countable-summand tags), never enumerations.  The Pic-vanishing facts for
R0[t] and R0[t,x] over the supported coefficient rings are a hardcoded
axiom table; anything outside it is refused rather than guessed.
"""

import itertools
import re
from math import gcd

from .rings import ZZ, Fp, Zinv, Zmod

_SUPPORTED = ("Z", "Zinv", "Fp", "Zmod")


# ---------------------------------------------------------------------------
# principal-ideal arithmetic over the supported coefficient rings
# ---------------------------------------------------------------------------
#
# An ideal is tracked by a canonical nonnegative generator: 0 is the zero
# ideal, 1 the unit ideal.  Over Z[1/n] the canonical form strips the
# inverted primes; over F_p everything collapses to 0 or 1; over Z/m the
# generator is gcd-normalized against m.

def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def ideal_canon(base, g):
    g = abs(g)
    if base.tag == "Z":
        return g
    if base.tag == "Zinv":
        if g == 0:
            return 0
        for q in _prime_factors(base.n):
            while g % q == 0:
                g //= q
        return g
    if base.tag == "Fp":
        return 0 if g % base.p == 0 else 1
    if base.tag == "Zmod":
        return gcd(g, base.m) % base.m
    raise ValueError("unsupported coefficient ring %s" % base.tag)


def ideal_mul(base, a, b):
    return ideal_canon(base, a * b)


def ideal_add(base, a, b):
    return ideal_canon(base, gcd(a, b))


def ideal_intersect(base, a, b):
    if a == 0 or b == 0:
        return 0
    return ideal_canon(base, a * b // gcd(a, b))


def ideal_colon(base, a, b):
    """(a) : (b), on canonical generators."""
    a, b = ideal_canon(base, a), ideal_canon(base, b)
    if b == 0:
        return 1
    if a == 0:
        return 0
    return ideal_canon(base, a // gcd(a, b))


def ideal_divides(base, a, b):
    """b in (a)?"""
    a, b = ideal_canon(base, a), ideal_canon(base, b)
    if a == 0:
        return b == 0
    return b % a == 0


def _is_prime_int(q):
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# monomial subrings
# ---------------------------------------------------------------------------

class MonomialSubring:
    """A = sum_{i<c} c_i R0 t^i + t^c R0[t], optionally tensored with R0[x].

    coeffs holds the canonical principal generators c_0..c_{c-1}; trailing
    unit ideals are trimmed, so c == len(coeffs) and either c == 0 (the
    degenerate A = R0[t]) or coeffs[-1] != 1.
    """

    def __init__(self, base, coeffs, extra_variable=False, label=None):
        if base.tag not in _SUPPORTED:
            raise ValueError("unsupported coefficient ring %s" % base.tag)
        coeffs = [ideal_canon(base, g) for g in coeffs]
        while coeffs and coeffs[-1] == 1:
            coeffs.pop()
        if coeffs and coeffs[0] != 1:
            raise ValueError("degree-0 coefficient ideal must be (1)")
        self.base = base
        self.coeffs = coeffs
        self.c = len(coeffs)
        self.extra_variable = bool(extra_variable)
        for i in range(self.c):
            for j in range(self.c):
                prod = ideal_mul(base, self.coeff(i), self.coeff(j))
                if not ideal_divides(base, self.coeff(i + j), prod):
                    raise ValueError(
                        "degree data not closed under multiplication "
                        "at degrees %d, %d" % (i, j))
        self.label = label or self.describe()

    def coeff(self, i):
        return self.coeffs[i] if i < self.c else 1

    def is_normal(self):
        return self.c == 0

    def __eq__(self, other):
        return (isinstance(other, MonomialSubring)
                and self.base == other.base
                and self.coeffs == other.coeffs
                and self.extra_variable == other.extra_variable)

    def describe(self):
        if self.base.tag == "Zinv":
            head, gens = "Z", ["1/%d" % self.base.n]
        elif self.base.tag == "Fp":
            head, gens = "F%d" % self.base.p, []
        elif self.base.tag == "Zmod":
            head, gens = "Z/%d" % self.base.m, []
        else:
            head, gens = "Z", []
        for i in range(1, self.c):
            g = self.coeffs[i]
            if g != 0:
                gens.append(_monomial_text(g, i))
        for i in range(self.c, 2 * self.c) if self.c else [1]:
            gens.append(_monomial_text(1, i))
        if self.extra_variable:
            gens.append("x")
        return "%s[%s]" % (head, ",".join(gens))

    def to_json(self):
        return {"base": self.base.tag,
                "base_param": self.base.m or self.base.p or self.base.n,
                "coeffs": list(self.coeffs), "conductor_degree": self.c,
                "extra_variable": self.extra_variable, "label": self.label}


def _monomial_text(g, i):
    t = "t" if i == 1 else "t^%d" % i
    return t if g == 1 else "%d%s" % (g, t)


_GEN_RE = re.compile(r"^(-?\d+)?\s*\*?\s*t(?:\^(\d+))?$")
_HEAD_RE = re.compile(r"^\s*(Z/(\d+)|F_?(\d+)|Z)\s*\[(.*)\]\s*$")


def parse_subring(text):
    """Parse `R0[<gens>]`, gens of the forms t^i, <c>t^i, 1/<n>, x."""
    m = _HEAD_RE.match(text)
    if not m:
        raise ValueError("cannot parse ring spec %r" % text)
    zmod_m, fp_p, body = m.group(2), m.group(3), m.group(4)
    if zmod_m:
        base = Zmod(int(zmod_m))
    elif fp_p:
        base = Fp(int(fp_p))
    else:
        base = ZZ()
    extra = False
    invert = 1
    monomials = []
    for part in [s.strip() for s in body.split(",") if s.strip()]:
        if part == "x":
            extra = True
            continue
        if part.startswith("1/"):
            invert *= int(part[2:])
            continue
        g = _GEN_RE.match(part)
        if not g:
            raise ValueError("cannot parse generator %r in %r" % (part, text))
        coeff = int(g.group(1)) if g.group(1) else 1
        degree = int(g.group(2)) if g.group(2) else 1
        monomials.append((coeff, degree))
    if invert > 1:
        if base.tag != "Z":
            raise ValueError("1/n generators need coefficient ring Z")
        base = Zinv(invert)
    coeffs = _degree_data(base, monomials)
    return MonomialSubring(base, coeffs, extra_variable=extra, label=text)


def _degree_data(base, monomials):
    """Coefficient ideals generated by the monomials, up to the conductor."""
    monomials = [(ideal_canon(base, g), d) for g, d in monomials]
    if any(d < 1 for _, d in monomials):
        raise ValueError("generators must have positive t-degree")
    unit_degrees = [d for g, d in monomials if g == 1]
    if not unit_degrees:
        raise ValueError(
            "no unit-coefficient generator: conductor would be infinite")
    g1 = min(unit_degrees)
    maxd = max(d for _, d in monomials)
    window = g1 * maxd + maxd + g1 + 2
    ideals = [0] * (window + 1)
    ideals[0] = 1
    changed = True
    while changed:
        changed = False
        for g, d in monomials:
            for i in range(window - d + 1):
                if ideals[i] == 0:
                    continue
                new = ideal_add(base, ideals[i + d],
                                ideal_mul(base, ideals[i], g))
                if new != ideals[i + d]:
                    ideals[i + d] = new
                    changed = True
    for c in range(window - g1 + 2):
        if all(ideals[d] == 1 for d in range(c, c + g1)):
            # a full unit run of length g1 propagates upward forever
            return ideals[:c]
    raise ValueError("no finite conductor below the search window")


# ---------------------------------------------------------------------------
# abelian-group descriptors
# ---------------------------------------------------------------------------

TAG_FREE_COUNTABLE = "FreeCountableRank"
TAG_MODP_COUNTABLE = "ModPCountable"
TAG_INVERTED = "InvertedIntegersAdditive"


def _invariant_chain(orders):
    """Fold cyclic orders into a divisibility chain d1 | d2 | ..."""
    primary = {}
    for d in orders:
        for q in _prime_factors(d):
            e = 0
            while d % q == 0:
                d //= q
                e += 1
            primary.setdefault(q, []).append(q ** e)
    for q in primary:
        primary[q].sort()
    height = max((len(v) for v in primary.values()), default=0)
    chain = []
    for level in range(height):
        d = 1
        for q, powers in primary.items():
            idx = len(powers) - height + level
            if idx >= 0:
                d *= powers[idx]
        chain.append(d)
    return chain


class AbGroupDescriptor:
    """free rank + torsion divisibility chain + countable-summand tags."""

    def __init__(self, free_rank=0, torsion=(), tags=()):
        self.free_rank = free_rank
        self.torsion = _invariant_chain([d for d in torsion if d > 1])
        self.tags = sorted(tuple(t) if isinstance(t, (tuple, list)) else (t,)
                           for t in tags)

    def __eq__(self, other):
        return (isinstance(other, AbGroupDescriptor)
                and self.free_rank == other.free_rank
                and self.torsion == other.torsion
                and self.tags == other.tags)

    def __repr__(self):
        return "AbGroupDescriptor(%d, %s, %s)" % (
            self.free_rank, self.torsion, self.tags)

    def plus(self, other):
        return AbGroupDescriptor(self.free_rank + other.free_rank,
                                 self.torsion + other.torsion,
                                 list(self.tags) + list(other.tags))

    def is_trivial(self):
        return not (self.free_rank or self.torsion or self.tags)

    def order(self):
        """Group order, or None when infinite."""
        if self.free_rank or self.tags:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def describe(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append("Z^%d" % self.free_rank)
        parts.extend("Z/%d" % d for d in self.torsion)
        for tag in self.tags:
            if tag[0] == TAG_FREE_COUNTABLE:
                parts.append("free abelian of countably infinite rank")
            elif tag[0] == TAG_MODP_COUNTABLE:
                parts.append(
                    "F_%d-vector space of countably infinite rank" % tag[1])
            elif tag[0] == TAG_INVERTED:
                parts.append("Z[1/%d]" % tag[1])
            else:
                parts.append(str(tag))
        return " + ".join(parts) if parts else "0"

    def paper_text(self):
        """The table's phrasing: single prime torsion reads as F_p."""
        if (not self.free_rank and not self.tags
                and len(self.torsion) == 1 and _is_prime_int(self.torsion[0])):
            return "F_%d" % self.torsion[0]
        return self.describe()

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion),
                "tags": [list(t) for t in self.tags],
                "text": self.describe()}


# ---------------------------------------------------------------------------
# truncated quotients R + N
# ---------------------------------------------------------------------------

class TruncatedQuotient:
    """(R0/m0)[x?] + nilpotent pieces (R0/m_i)[x?] t^i, t-degrees cut at
    `cutoff`.

    reduced_modulus == 1 is allowed and means the zero ring (the degenerate
    A = normalization square needs it).  square_zero records whether N^2 = 0;
    the default check multiplies monomial pieces in this presentation, and a
    caller holding a finer model (scaled pieces inside a conductor square)
    may pass its own verdict.
    """

    def __init__(self, base, reduced_modulus, nil_pieces, cutoff,
                 extra_variable=False, label=None, square_zero=None):
        self.base = base
        self.m0 = ideal_canon(base, reduced_modulus)
        self.pieces = sorted((i, ideal_canon(base, m))
                             for i, m in nil_pieces
                             if ideal_canon(base, m) != 1)
        self.cutoff = cutoff
        self.extra_variable = bool(extra_variable)
        self.label = label or "quotient"
        if self.m0 == 1 and self.pieces:
            raise ValueError("zero reduced part under nonzero nilpotents")
        if any(i < 1 or i >= cutoff for i, _ in self.pieces):
            raise ValueError("nilpotent degrees must lie in [1, cutoff)")
        if square_zero is None:
            degs = {i for i, _ in self.pieces}
            square_zero = not any(i + j in degs
                                  for i in degs for j in degs)
        self.square_zero = bool(square_zero)

    def is_zero_ring(self):
        return self.m0 == 1

    def nilpotent_descriptor(self):
        return _module_descriptor(self.base, [m for _, m in self.pieces],
                                  self.extra_variable)

    def is_finite(self):
        if self.extra_variable:
            return False
        if self.base.tag in ("Fp", "Zmod"):
            return True
        return self.m0 != 0 and all(m != 0 for _, m in self.pieces)

    def element_moduli(self):
        """Cyclic moduli (reduced part first) for exhaustive enumeration."""
        if not self.is_finite():
            raise ValueError("infinite quotient")
        char = {"Fp": self.base.p, "Zmod": self.base.m}.get(self.base.tag, 0)
        return [m if m != 0 else char
                for m in [self.m0] + [m for _, m in self.pieces]]

    def enumerate_units(self):
        """Brute-force unit count; square-zero N makes a tuple a unit
        exactly when its reduced coordinate is one."""
        if not self.square_zero:
            raise ValueError("enumeration shortcut needs N^2 = 0")
        moduli = self.element_moduli()
        count = 0
        for elt in itertools.product(*[range(m) for m in moduli]):
            if gcd(elt[0], moduli[0]) == 1:
                count += 1
        return count

    def to_json(self):
        return {"base": self.base.tag, "reduced_modulus": self.m0,
                "nil_pieces": [list(p) for p in self.pieces],
                "cutoff": self.cutoff, "square_zero": self.square_zero,
                "extra_variable": self.extra_variable}


def _module_descriptor(base, moduli, extra_variable):
    """Additive descriptor of a direct sum of (R0/m)[x?] pieces."""
    desc = AbGroupDescriptor()
    for m in moduli:
        if m == 1:
            continue
        if not extra_variable:
            if m != 0:
                piece = AbGroupDescriptor(torsion=[m])
            elif base.tag == "Z":
                piece = AbGroupDescriptor(free_rank=1)
            elif base.tag == "Zinv":
                piece = AbGroupDescriptor(tags=[(TAG_INVERTED, base.n)])
            elif base.tag == "Fp":
                piece = AbGroupDescriptor(torsion=[base.p])
            else:
                piece = AbGroupDescriptor(torsion=[base.m])
        else:
            if m == 0 and base.tag == "Z":
                piece = AbGroupDescriptor(tags=[(TAG_FREE_COUNTABLE,)])
            elif m == 0 and base.tag == "Fp":
                piece = AbGroupDescriptor(tags=[(TAG_MODP_COUNTABLE,
                                                 base.p)])
            elif m != 0 and _is_prime_int(m):
                piece = AbGroupDescriptor(tags=[(TAG_MODP_COUNTABLE, m)])
            else:
                raise ValueError(
                    "no descriptor vocabulary for such [x] summands "
                    "(base %s, modulus %d)" % (base.tag, m))
        desc = desc.plus(piece)
    return desc


# ---------------------------------------------------------------------------
# unit groups
# ---------------------------------------------------------------------------

def _zmod_unit_orders(m):
    """Cyclic factors of (Z/m)^* via CRT on prime powers."""
    out = []
    for q in _prime_factors(m):
        e = 0
        mm = m
        while mm % q == 0:
            mm //= q
            e += 1
        if q == 2:
            if e == 2:
                out.append(2)
            elif e >= 3:
                out.extend([2, 2 ** (e - 2)])
        else:
            out.append((q - 1) * q ** (e - 1))
    return [d for d in out if d > 1]


def _squarefree(m):
    q = 2
    while q * q <= m:
        if m % (q * q) == 0:
            return False
        q += 1
    return True


def unit_group(q):
    """Units of R + N as a descriptor with generator bookkeeping.

    Q^* = R^* x (1 + N) and 1 + N is isomorphic to N additively because
    N^2 = 0; R^* comes from the built-in table for the supported reduced
    parts.
    """
    if not q.square_zero:
        raise ValueError("unit splitting needs a square-zero nilpotent part")
    base, m0 = q.base, q.m0
    if q.is_zero_ring():
        trivial = AbGroupDescriptor()
        return {"descriptor": trivial, "reduced_units": trivial,
                "one_plus_nilpotent": trivial, "generators": []}
    if q.extra_variable:
        if m0 == 0:
            reduced_ok = base.tag in ("Z", "Zinv", "Fp") or \
                (base.tag == "Zmod" and _squarefree(base.m))
        else:
            reduced_ok = _squarefree(m0)
        if not reduced_ok:
            raise ValueError("polynomial reduced part over a non-reduced "
                             "coefficient ring")
    gens = []
    if m0 == 0 and base.tag == "Z":
        reduced = AbGroupDescriptor(torsion=[2])
        gens.append(("-1", 2))
    elif m0 == 0 and base.tag == "Zinv":
        primes = _prime_factors(base.n)
        reduced = AbGroupDescriptor(free_rank=len(primes), torsion=[2])
        gens.append(("-1", 2))
        gens.extend((str(p), None) for p in primes)
    elif m0 == 0 and base.tag == "Fp":
        reduced = AbGroupDescriptor(torsion=[base.p - 1])
        if base.p > 2:
            gens.append(("primitive root mod %d" % base.p, base.p - 1))
    else:
        modulus = m0 if m0 != 0 else base.m
        orders = _zmod_unit_orders(modulus)
        reduced = AbGroupDescriptor(torsion=orders)
        if orders:
            gens.append(("units mod %d" % modulus, None))
    one_plus_n = q.nilpotent_descriptor()
    for i, m in q.pieces:
        label = "1 + %s" % _monomial_text(1, i)
        if q.extra_variable:
            label += " (and its x-multiples)"
        order = m if m != 0 else \
            {"Fp": base.p, "Zmod": base.m}.get(base.tag)
        gens.append((label, order))
    return {"descriptor": reduced.plus(one_plus_n),
            "reduced_units": reduced,
            "one_plus_nilpotent": one_plus_n,
            "generators": gens}


# ---------------------------------------------------------------------------
# the conductor square
# ---------------------------------------------------------------------------

class MilnorSquare:
    """A -> R0[t(,x)] over A/c -> R0[t(,x)]/c, c the conductor of the
    normalization into A."""

    def __init__(self, subring):
        a = subring
        base = a.base
        c = a.c
        cond = []
        for i in range(c):
            b = 1
            for j in range(c - i):
                b = ideal_intersect(base, b, a.coeff(i + j))
            cond.append(b)
        self.subring = a
        self.conductor = cond      # b_i for i < c; (1) from degree c on
        self.base = base
        # degreewise kill data: at degree d the conductor holds b_d R0,
        # the normalization holds R0, and A holds c_d R0
        abar_sq_zero = self._square_zero(
            [1] * c, cond, [i > 0 for i in range(c)])
        a_present = [False] * c
        a_pieces = []
        self.inclusion_scalings = {}
        for i in range(1, c):
            ci = a.coeff(i)
            if ci == 0:
                continue
            qi = ideal_colon(base, cond[i], ci)
            if qi != 1:
                a_present[i] = True
                a_pieces.append((i, qi))
                self.inclusion_scalings[i] = ci
        a_sq_zero = self._square_zero(list(a.coeffs), cond, a_present)
        self.abar_quotient = TruncatedQuotient(
            base, cond[0] if c else 1,
            [(i, cond[i]) for i in range(1, c)], max(c, 1),
            extra_variable=a.extra_variable,
            label="normalization mod conductor", square_zero=abar_sq_zero)
        self.a_quotient = TruncatedQuotient(
            base, cond[0] if c else 1, a_pieces, max(c, 1),
            extra_variable=a.extra_variable,
            label="subring mod conductor", square_zero=a_sq_zero)
        self._verify_cartesian()

    def _square_zero(self, content, kills, present):
        # products of surviving degree-i and degree-j parts must land in
        # the conductor; content[d] generates the ambient degree-d part
        c = self.subring.c
        for i in range(1, c):
            for j in range(1, c):
                if not (present[i] and present[j]):
                    continue
                prod = ideal_mul(self.base, content[i], content[j])
                kill = kills[i + j] if i + j < c else 1
                if not ideal_divides(self.base, kill, prod):
                    return False
        return True

    def _verify_cartesian(self):
        # the pullback's degree-d ideal is (c_d) + (b_d); equality with
        # (c_d) is b_d in (c_d), checked to degree c + 2; surjectivity of
        # the normalization onto its quotient holds by construction
        a, base = self.subring, self.base
        for d in range(a.c + 3):
            b_d = self.conductor[d] if d < a.c else 1
            if not ideal_divides(base, a.coeff(d), b_d):
                raise AssertionError("square not cartesian at degree %d" % d)

    def conductor_text(self):
        a = self.subring
        if a.c == 0:
            return "(1)"
        ring = "%s[t]" % ("Z" if self.base.tag in ("Z", "Zinv") else
                          "F%d" % self.base.p if self.base.tag == "Fp"
                          else "Z/%d" % self.base.m)
        parts = []
        for i, b in enumerate(self.conductor):
            if b == 0:
                continue
            parts.append(str(b) if i == 0 else _monomial_text(b, i))
        parts.append("%s%s" % (_monomial_text(1, a.c), ring))
        return "(" + " + ".join(parts) + ")"

    def to_json(self):
        return {"subring": self.subring.to_json(),
                "conductor": list(self.conductor),
                "conductor_text": self.conductor_text(),
                "abar_quotient": self.abar_quotient.to_json(),
                "a_quotient": self.a_quotient.to_json(),
                "normalization_surjects": True}


def conductor_square(subring):
    return MilnorSquare(subring)


_VANISHING_BASES = ("Z", "Zinv", "Fp")


def picard_from_square(sq):
    """Pic(A) = coker[Abar^* x (A/c)^* -> (Abar/c)^*].

    The reduced parts of the two quotients coincide (both are R0/b_0), so
    the (A/c)^* factor covers the reduced units downstairs and the
    cokernel is the nilpotent quotient N-bar/N_A: one piece
    (R0/b_i)/(c_i R0/b_i) = R0/(c_i) per degree 1 <= i < c, tensored with
    R0[x] when the extra variable is present.
    """
    a, base = sq.subring, sq.base
    if base.tag not in _VANISHING_BASES:
        raise ValueError(
            "no Pic-vanishing entry for %s coefficients: refusing"
            % base.tag)
    if a.c:
        b0 = sq.conductor[0]
        if not (b0 == 0 or _is_prime_int(b0)):
            raise ValueError(
                "no Pic-vanishing entry for a quotient with reduced part "
                "Z/%d: refusing" % b0)
        if not sq.abar_quotient.square_zero:
            raise ValueError(
                "nilpotent part of the quotient does not square to zero: "
                "the unit cokernel closed form does not apply")
    pieces = []
    gens = []
    for i in range(1, a.c):
        ci = a.coeff(i)
        pieces.append(ci)
        if ci != 1:
            gens.append(("[1 + %s]" % _monomial_text(1, i),
                         ci if ci != 0 else None))
    desc = _module_descriptor(base, pieces, a.extra_variable)
    return {"descriptor": desc, "generators": gens,
            "vanishing_inputs": {"pic_normalization": 0,
                                 "pic_subring_quotient": 0}}


def picard_group(subring):
    return picard_from_square(conductor_square(subring))


# ---------------------------------------------------------------------------
# the six-row table
# ---------------------------------------------------------------------------

def table_rows(p):
    return [
        ("Z[t^2,t^3]", AbGroupDescriptor(free_rank=1), "Z"),
        ("Z[t^2,t^3,x]",
         AbGroupDescriptor(tags=[(TAG_FREE_COUNTABLE,)]),
         "free abelian of countably infinite rank"),
        ("Z[%dt,t^2,t^3]" % p, AbGroupDescriptor(torsion=[p]), "F_p"),
        ("Z[%dt,t^2,t^3,x]" % p,
         AbGroupDescriptor(tags=[(TAG_MODP_COUNTABLE, p)]),
         "F_p-vector space of countably infinite rank"),
        ("Z[1/%d,t^2,t^3]" % p,
         AbGroupDescriptor(tags=[(TAG_INVERTED, p)]), "Z[1/p]"),
        ("F%d[t^2,t^3,x]" % p,
         AbGroupDescriptor(tags=[(TAG_MODP_COUNTABLE, p)]),
         "F_p-vector space of countably infinite rank"),
    ]


def reproduce_table(p=5):
    """All six rows, each computed through its own conductor square."""
    if not _is_prime_int(p):
        raise ValueError("p must be prime")
    rows = []
    for ring_text, expected, phrase in table_rows(p):
        result = picard_group(parse_subring(ring_text))
        got = result["descriptor"]
        rows.append({"ring": ring_text, "pic": got, "expected": expected,
                     "paper_phrase": phrase, "ok": got == expected})
    return rows


# ---------------------------------------------------------------------------
# conductor chains
# ---------------------------------------------------------------------------

class ChainStep:
    def __init__(self, adjoined, colon_degreewise, ring_after, certificate):
        self.adjoined = adjoined            # (coeff, degree)
        self.colon = colon_degreewise       # ideals I_d for d < previous c
        self.ring_after = ring_after
        self.certificate = certificate

    def to_json(self):
        return {"adjoined": _monomial_text(*self.adjoined),
                "colon_ideal": list(self.colon),
                "ring_after": self.ring_after.to_json(),
                "certificate": self.certificate}


def _colon_of_adjunction(a, g, i):
    """[A : A[g t^i]] degreewise: I_d = (c_d) cap_m ((c_{d+im}) : (g^m)).

    Degrees at and above the conductor lie in the colon automatically and
    are not listed.
    """
    base = a.base
    out = []
    for d in range(a.c):
        ideal = a.coeff(d)
        m = 1
        while d + i * m < a.c:
            ideal = ideal_intersect(
                base, ideal,
                ideal_colon(base, a.coeff(d + i * m),
                            ideal_canon(base, g ** m)))
            m += 1
        out.append(ideal)
    return out


def _colon_contains(base, big, small):
    return all(ideal_divides(base, b, s) for b, s in zip(big, small))


def _divisor_pool(a):
    prod = 1
    for g in a.coeffs:
        if g not in (0, 1):
            prod *= g
    divisors = {1}
    for q in _prime_factors(prod) if prod > 1 else []:
        e = 0
        pp = prod
        while pp % q == 0:
            pp //= q
            e += 1
        divisors = {d * q ** f for d in divisors for f in range(e + 1)}
    return sorted(divisors)


def _candidates(a):
    """Monomials g t^i in the normalization but not in A.

    Coefficients from outside the divisor pool of the degree data never
    change a colon ideal, so the pool is exhaustive up to equality of I_y.
    """
    out = []
    for i in range(1, a.c):
        for g in _divisor_pool(a):
            g = ideal_canon(a.base, g)
            if not ideal_divides(a.base, a.coeff(i), g):
                out.append((g, i))
    return sorted(set(out), key=lambda gi: (gi[1], gi[0]))


def _adjoin(a, g, i):
    base = a.base
    window = a.c + i
    ideals = [a.coeff(d) for d in range(window + 1)]
    changed = True
    while changed:
        changed = False
        for d in range(window + 1):
            if ideals[d] == 0:
                continue
            for step in range(1, (window - d) // i + 1):
                target = d + i * step
                val = ideal_mul(base, ideals[d],
                                ideal_canon(base, g ** step))
                new = ideal_add(base, ideals[target], val)
                if new != ideals[target]:
                    ideals[target] = new
                    changed = True
    c_new = a.c
    while c_new > 0 and ideals[c_new - 1] == 1:
        c_new -= 1
    return MonomialSubring(base, ideals[:c_new],
                           extra_variable=a.extra_variable)


def _primality_certificate(a, colon):
    """Exhibit A/I as a domain inside the monomial model.

    The quotient is a direct sum of cyclic pieces c_d R0 / I_d; the check
    verifies the degree-0 piece is a domain quotient of R0 and that no two
    nonzero monomial basis products vanish (all pairs below degree 2c).
    """
    base = a.base
    moduli = {}
    for d in range(a.c):
        if a.coeff(d) == 0:
            continue
        q = ideal_colon(base, colon[d], a.coeff(d))
        if q != 1:
            moduli[d] = q
    q0 = moduli.get(0, 1)
    if q0 == 1 and moduli:
        return {"ok": False,
                "reason": "constants die but higher pieces survive"}
    ok = q0 == 0 or _is_prime_int(q0)
    reps = {}
    for d, q in moduli.items():
        bound = q if q != 0 else 4
        if base.tag == "Fp":
            bound = min(bound, base.p)
        reps[d] = [r for r in range(1, max(bound, 2))
                   if not ideal_divides(base, q, r)] or [1]
    pairs_checked = 0
    for d, e in itertools.product(moduli, repeat=2):
        if d + e >= 2 * a.c:
            continue
        cd = ideal_mul(base, a.coeff(d), a.coeff(e))
        kill = colon[d + e] if d + e < a.c else 1
        for r1 in reps[d]:
            for r2 in reps[e]:
                pairs_checked += 1
                if ideal_divides(base, kill,
                                 ideal_canon(base, r1 * r2 * cd)):
                    ok = False
    return {"ok": ok, "reduced_modulus": q0,
            "monomial_moduli": {str(d): q for d, q in moduli.items()},
            "pairs_checked": pairs_checked,
            "extra_variable_note": ("tensoring the quotient with a "
                                    "polynomial variable preserves being "
                                    "a domain"
                                    if a.extra_variable else None)}


def conductor_chain(subring):
    """A = A_0 < A_1 < ... < R0[t], every colon ideal [A_{k-1}:A_k] prime.

    Each step adjoins the monomial maximizing I_y = [A : A[y]]; among the
    maximal colon ideals, ties go to the smallest degree, then the
    smallest coefficient.
    """
    a = subring
    if a.base.tag not in ("Z", "Fp"):
        raise ValueError("chains are computed over Z or a prime field")
    steps = []
    guard = 0
    while not a.is_normal():
        guard += 1
        assert guard <= 100, "chain failed to terminate"
        cands = [(g, i, _colon_of_adjunction(a, g, i))
                 for g, i in _candidates(a)]
        assert cands, "no candidate despite A != normalization"
        maximal = [
            (g, i, colon) for g, i, colon in cands
            if not any(_colon_contains(a.base, other, colon)
                       and other != colon for _, _, other in cands)]
        g, i, colon = min(maximal, key=lambda t: (t[1], t[0]))
        cert = _primality_certificate(a, colon)
        if not cert["ok"]:
            raise AssertionError(
                "maximal colon ideal failed the primality certificate "
                "(adjoining %s)" % _monomial_text(g, i))
        a_next = _adjoin(a, g, i)
        steps.append(ChainStep((g, i), colon, a_next, cert))
        a = a_next
    return steps
