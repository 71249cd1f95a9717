"""Finite test algebras: the evaluation points of the functor calculus.

A finite algebra is modeled as a Z-algebra with a distinguished basis: each
basis element e_i carries an additive order o_i (so the additive group is
⊕ Z/o_i) and products e_i·e_j are stored as coordinate vectors.  Monomial
quotients like F_2[s,t]/(s,t)^2 are the common case (make_test_algebra);
componentwise products of those cover the rest of the battery.

The base ring A acts through the characteristic and, for polynomial A,
through recorded variable images.  Everything downstream (modules ⊗ B,
kernels of base-changed maps) reduces to integer lattices over this basis.
"""

import itertools
from math import gcd

from .rings import BaseRing, Fp, Zmod, ZZ, is_prime, print_ring
from .linalg import QuotientLattice


def _lcm(a, b):
    return a * b // gcd(a, b)


class FiniteAlgebra:
    """Commutative finite ring with basis, additive orders, product table."""

    def __init__(self, names, orders, one, mult, k=None, var_images=None,
                 label=None, check=True):
        self.names = tuple(names)
        self.orders = tuple(orders)
        self.rank = len(names)
        self.one = tuple(one)
        # mult[i][j] = coords of e_i * e_j, reduced
        self.mult = tuple(tuple(tuple(v) for v in row) for row in mult)
        self.k = k  # coefficient BaseRing when the basis is free over it
        self.var_images = dict(var_images or {})
        self.label = label or "algebra"
        assert all(o >= 1 for o in self.orders)
        if check:
            self._check_axioms()

    # ---- arithmetic on coordinate vectors ----

    def reduce(self, v):
        return tuple(x % o for x, o in zip(v, self.orders))

    def add(self, a, b):
        return self.reduce([x + y for x, y in zip(a, b)])

    def sub(self, a, b):
        return self.reduce([x - y for x, y in zip(a, b)])

    def scale(self, c, a):
        return self.reduce([c * x for x in a])

    def mul(self, a, b):
        out = [0] * self.rank
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                for t, m in enumerate(self.mult[i][j]):
                    out[t] += x * y * m
        return self.reduce(out)

    def zero(self):
        return (0,) * self.rank

    def from_int(self, c):
        return self.scale(c, self.one)

    def is_zero(self, a):
        return all(x % o == 0 for x, o in zip(a, self.orders))

    def mult_matrix(self, a):
        """rank x rank integer matrix of x ↦ a·x in basis coordinates."""
        cols = [self.mul(a, self._basis_vec(j)) for j in range(self.rank)]
        return [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]

    def _basis_vec(self, i):
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def elements(self, cap=200000):
        total = 1
        for o in self.orders:
            total *= o
            if total > cap:
                raise ValueError("algebra too large to enumerate (%s)" % self.label)
        return [tuple(v) for v in itertools.product(*[range(o) for o in self.orders])]

    def size(self):
        total = 1
        for o in self.orders:
            total *= o
        return total

    def char(self):
        """Additive order of 1."""
        c = 1
        for x, o in zip(self.one, self.orders):
            if x % o:
                c = _lcm(c, o // gcd(x, o))
        return c

    def is_unit(self, a):
        m = self.mult_matrix(a)
        # a is a unit iff multiplication by a is surjective; on a finite
        # module surjective == bijective, test by solving a·x = 1
        return self._solve_mult(m, self.one) is not None

    def inverse(self, a):
        x = self._solve_mult(self.mult_matrix(a), self.one)
        if x is None:
            raise ValueError("not a unit")
        return self.reduce(x)

    def _solve_mult(self, m, target):
        # solve m·x ≡ target modulo the order lattice, over Z
        from .linalg import IntOps, solve, hstack
        n = self.rank
        aug = [[m[i][j] for j in range(n)] + [self.orders[i] if i == j else 0
                                              for j in range(n)]
               for i in range(n)]
        sol = solve(IntOps(), aug, list(target))
        return None if sol is None else tuple(sol[:n])

    # ---- structure over a base ring ----

    def is_algebra_over(self, base):
        """Can this algebra receive a ring map from base (with stored images)?"""
        c = self.char()
        if base.tag == "Z":
            return True
        if base.tag in ("Zmod", "Fp"):
            return base.char() % c == 0
        if base.tag == "Zinv":
            return gcd(base.n, c) == 1
        if base.tag == "Poly":
            if not self.is_algebra_over(base.coeff):
                return False
            return all(v in self.var_images for v in base.vars)
        return False

    def structure_image(self, base, elt):
        """Image in self of a base-ring element, through the structure map."""
        if base.tag == "Z":
            return self.from_int(elt)
        if base.tag in ("Zmod", "Fp"):
            return self.from_int(elt)
        if base.tag == "Zinv":
            num = self.from_int(elt.numerator)
            den = self.from_int(elt.denominator)
            return self.mul(num, self.inverse(den))
        out = self.zero()
        for e, c in elt.items():
            term = self.structure_image(base.coeff, c)
            for v, kdeg in zip(base.vars, e):
                img = self.var_images[v]
                for _ in range(kdeg):
                    term = self.mul(term, img)
            out = self.add(out, term)
        return out

    def with_var_images(self, images):
        return FiniteAlgebra(self.names, self.orders, self.one, self.mult,
                             k=self.k, var_images={**self.var_images, **images},
                             label=self.label, check=False)

    # ---- local structure ----

    def nilpotency_index(self, a, cap=None):
        cap = cap or (self.size() + 1)
        x = a
        for e in range(1, cap + 1):
            if self.is_zero(x):
                return e
            x = self.mul(x, a)
        return None

    def is_local(self):
        try:
            self.local_data()
            return True
        except ValueError:
            return False

    def local_data(self):
        """(radical generators as coordinate vectors, residue characteristic).

        Local test algebras here are monomial quotients over F_p or Z/p^e
        and their images: char must be a prime power p^e, and every basis
        element other than 1 must be nilpotent.
        """
        c = self.char()
        p = None
        for q in range(2, c + 1):
            if c % q == 0:
                p = q
                break
        if p is None or not is_prime(p):
            raise ValueError("%s is not local: characteristic %d" % (self.label, c))
        e = 0
        cc = c
        while cc % p == 0:
            cc //= p
            e += 1
        if cc != 1:
            raise ValueError("%s is not local: characteristic %d not a prime power"
                             % (self.label, c))
        rad = []
        for i in range(self.rank):
            b = self._basis_vec(i)
            # strip the unit component: b ≡ λ·1 + nilpotent?
            if b == tuple(x % o for x, o in zip(self.one, self.orders)):
                continue
            if self.nilpotency_index(b, cap=self.rank * e + 2) is None:
                raise ValueError("%s is not local: basis element %s not nilpotent"
                                 % (self.label, self.names[i]))
            rad.append(b)
        if e > 1 or any(o != p for o in self.orders):
            rad.append(self.scale(p, self.one))
        return rad, p

    # ---- checks and serialization ----

    def _check_axioms(self):
        if self.rank == 0:
            return
        if self.rank > 32:
            return  # exhaustive check capped per contract
        basis = [self._basis_vec(i) for i in range(self.rank)]
        for i, a in enumerate(basis):
            assert self.mul(self.one, a) == a, "unit fails on %s" % self.names[i]
            for j in range(i, self.rank):
                b = basis[j]
                assert self.mul(a, b) == self.mul(b, a)
        for a in basis:
            for b in basis:
                ab = self.mul(a, b)
                for c in basis:
                    assert self.mul(ab, c) == self.mul(a, self.mul(b, c)), \
                        "associativity fails in %s" % self.label
        # additive orders consistent: o_i * e_i * e_j must vanish
        for i, a in enumerate(basis):
            for b in basis:
                assert self.is_zero(self.scale(self.orders[i], self.mul(a, b)))

    def to_json(self):
        out = {
            "label": self.label,
            "names": list(self.names),
            "orders": list(self.orders),
            "one": list(self.one),
            "mult": [[list(v) for v in row] for row in self.mult],
        }
        if self.k is not None:
            out["coeff"] = print_ring(self.k)
        if self.var_images:
            out["var_images"] = {v: list(c) for v, c in self.var_images.items()}
        return out

    @staticmethod
    def from_json(data):
        k = None
        if "coeff" in data:
            from .rings import parse_ring
            k = parse_ring(data["coeff"])
        return FiniteAlgebra(
            data["names"], data["orders"], data["one"], data["mult"], k=k,
            var_images={v: tuple(c) for v, c in data.get("var_images", {}).items()},
            label=data.get("label", "algebra"))

    def __repr__(self):
        return "<%s rank %d>" % (self.label, self.rank)


class TestAlgebra(FiniteAlgebra):
    """Monomial quotient k[vars]/(monomial ideal, degree truncation).

    Basis = standard monomials, graded-lex sorted; the product of two
    standard monomials is either standard or zero.  Records the quotient
    data for serialization.
    """

    def __init__(self, k, vars, ideal_monomials, trunc, label=None):
        self.kring = k
        self.gen_vars = tuple(vars)
        self.ideal_monomials = tuple(sorted(tuple(m) for m in ideal_monomials))
        self.trunc = trunc
        basis = _standard_monomials(len(self.gen_vars), self.ideal_monomials, trunc)
        index = {e: i for i, e in enumerate(basis)}
        names = [_mono_name(self.gen_vars, e) for e in basis]
        m = k.char()
        orders = [m] * len(basis)
        one = [0] * len(basis)
        zero_e = (0,) * len(self.gen_vars)
        if zero_e in index:  # absent only for the zero ring (1 in ideal)
            one[index[zero_e]] = 1
        mult = []
        for e1 in basis:
            row = []
            for e2 in basis:
                s = tuple(a + b for a, b in zip(e1, e2))
                v = [0] * len(basis)
                if s in index:
                    v[index[s]] = 1
                row.append(tuple(v))
            mult.append(row)
        var_images = {}
        for vname in self.gen_vars:
            e = tuple(1 if w == vname else 0 for w in self.gen_vars)
            vec = [0] * len(basis)
            if e in index:
                vec[index[e]] = 1
            var_images[vname] = tuple(vec)
        if label is None:
            label = _algebra_label(k, self.gen_vars, self.ideal_monomials, trunc)
        super().__init__(names, orders, one, mult, k=k,
                         var_images=var_images, label=label)
        self.basis_monomials = basis

    def to_json(self):
        out = super().to_json()
        out["kind"] = "monomial"
        out["coeff"] = print_ring(self.kring)
        out["vars"] = list(self.gen_vars)
        out["ideal"] = {
            "monomials": [list(m) for m in self.ideal_monomials],
            "trunc": self.trunc,
        }
        return out


def _standard_monomials(nvars, ideal_monomials, trunc):
    # finite iff every variable is killed by a pure power or by truncation
    if trunc is None:
        for i in range(nvars):
            if not any(all(m[j] == 0 for j in range(nvars) if j != i) and m[i] > 0
                       for m in ideal_monomials):
                raise ValueError(
                    "infinite rank: variable %d is not nilpotent and there is "
                    "no truncation" % i)
    bound = []
    for i in range(nvars):
        pure = [m[i] for m in ideal_monomials
                if m[i] > 0 and all(m[j] == 0 for j in range(nvars) if j != i)]
        b = min(pure) if pure else trunc
        if trunc is not None:
            b = min(b, trunc)
        bound.append(b)
    out = []
    for e in itertools.product(*[range(b) for b in bound]):
        if trunc is not None and sum(e) >= trunc:
            continue
        if any(all(e[i] >= m[i] for i in range(nvars)) for m in ideal_monomials):
            continue
        out.append(e)
    # graded order; within a degree, earlier variables first (s before t)
    out.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return out


def _mono_name(vars, e):
    if not any(e):
        return "1"
    return "*".join(v if k == 1 else "%s^%d" % (v, k)
                    for v, k in zip(vars, e) if k)


def _algebra_label(k, vars, ideal_monomials, trunc):
    if not vars:
        return print_ring(k)
    parts = [_mono_name(vars, m) for m in ideal_monomials]
    if trunc is not None:
        parts.append("deg>=%d" % trunc)
    return "%s[%s]/(%s)" % (print_ring(k), ",".join(vars), ",".join(parts) or "0")


def make_test_algebra(k, vars, ideal=None, trunc=None, label=None):
    """Build the monomial quotient k[vars]/(ideal, degree >= trunc).

    k must be F_p or Z/m; ideal entries are exponent tuples or monomial
    strings like "x^2" or "s*t".  Raises if the quotient has infinite rank.

    >>> B = make_test_algebra(Fp(2), ("s", "t"), trunc=2)
    >>> B.names
    ('1', 's', 't')
    >>> B.mul(B.var_images['s'], B.var_images['t']) == B.zero()
    True
    >>> make_test_algebra(Fp(3), ("s", "t", "u"), trunc=3).rank
    10
    """
    if k.tag not in ("Fp", "Zmod"):
        raise ValueError("coefficient ring must be F_p or Z/m, got %s"
                         % print_ring(k))
    vars = tuple(vars)
    monomials = []
    for m in (ideal or []):
        if isinstance(m, str):
            monomials.append(_parse_monomial(vars, m))
        else:
            monomials.append(tuple(m))
    return TestAlgebra(k, vars, monomials, trunc, label=label)


def _parse_monomial(vars, text):
    e = [0] * len(vars)
    for factor in text.replace(" ", "").split("*"):
        if "^" in factor:
            v, _, kk = factor.partition("^")
            k = int(kk)
        else:
            v, k = factor, 1
        if v not in vars:
            raise ValueError("unknown variable %r" % v)
        e[vars.index(v)] += k
    return tuple(e)


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

def direct_product(b1, b2, label=None):
    """Componentwise product as a Z-algebra; no coefficient-ring condition."""
    if b1.rank == 0 or b2.rank == 0:
        raise ValueError("product with rank-0 algebra")
    names = ["(%s,0)" % n for n in b1.names] + ["(0,%s)" % n for n in b2.names]
    orders = list(b1.orders) + list(b2.orders)
    one = list(b1.one) + list(b2.one)
    r1, r2 = b1.rank, b2.rank
    z1, z2 = [0] * r1, [0] * r2
    mult = []
    for i in range(r1 + r2):
        row = []
        for j in range(r1 + r2):
            if i < r1 and j < r1:
                row.append(tuple(list(b1.mult[i][j]) + z2))
            elif i >= r1 and j >= r1:
                row.append(tuple(z1 + list(b2.mult[i - r1][j - r1])))
            else:
                row.append(tuple(z1 + z2))
        mult.append(row)
    var_images = {}
    for v in set(b1.var_images) & set(b2.var_images):
        var_images[v] = tuple(list(b1.var_images[v]) + list(b2.var_images[v]))
    k = b1.k if (b1.k is not None and b1.k == b2.k) else None
    return FiniteAlgebra(names, orders, one, mult, k=k, var_images=var_images,
                         label=label or "%s x %s" % (b1.label, b2.label))


def algebra_product(b1, b2):
    """Product algebra over a shared coefficient ring.

    >>> B = algebra_product(make_test_algebra(Fp(2), ("s",), ideal=["s^2"]),
    ...                     make_test_algebra(Fp(2), ()))
    >>> B.rank
    3
    """
    if b1.k is None or b2.k is None or b1.k != b2.k:
        raise ValueError("mismatched coefficient rings: %s vs %s"
                         % (b1.k and print_ring(b1.k), b2.k and print_ring(b2.k)))
    return direct_product(b1, b2)


def product_injections_data(b1, b2, prod):
    """The two projections prod -> b1, prod -> b2 as AlgebraHoms."""
    r1 = b1.rank
    p1 = AlgebraHom(prod, b1,
                    [b1._basis_vec(i) if i < r1 else b1.zero()
                     for i in range(prod.rank)])
    p2 = AlgebraHom(prod, b2,
                    [b2.zero() if i < r1 else b2._basis_vec(i - r1)
                     for i in range(prod.rank)])
    return p1, p2


def local_data(b):
    """Radical generators and residue field of a local finite algebra.

    >>> rad, p = local_data(make_test_algebra(Fp(2), ("s", "t"), trunc=2))
    >>> (len(rad), p)
    (2, 2)
    >>> local_data(make_test_algebra(Zmod(8), ()))[1]
    2
    """
    return b.local_data()


# ---------------------------------------------------------------------------
# algebra homomorphisms
# ---------------------------------------------------------------------------

class AlgebraHom:
    """Additive-basis-wise map between finite algebras, checked to be a
    ring homomorphism: unit, products of basis pairs, additive orders."""

    def __init__(self, source, target, images, check=True):
        self.source = source
        self.target = target
        self.images = [tuple(v) for v in images]
        assert len(self.images) == source.rank
        if check:
            self._check()

    def apply(self, a):
        out = self.target.zero()
        for x, img in zip(a, self.images):
            if x:
                out = self.target.add(out, self.target.scale(x, img))
        return out

    def _check(self):
        s, t = self.source, self.target
        if not t.is_zero(t.sub(self.apply(s.one), t.one)):
            raise ValueError("unit not preserved")
        for i in range(s.rank):
            if not t.is_zero(t.scale(s.orders[i], self.images[i])):
                raise ValueError("additive order of %s not respected" % s.names[i])
            for j in range(i, s.rank):
                lhs = self.apply(s.mul(s._basis_vec(i), s._basis_vec(j)))
                rhs = t.mul(self.images[i], self.images[j])
                if not t.is_zero(t.sub(lhs, rhs)):
                    raise ValueError("products not preserved at (%s, %s)"
                                     % (s.names[i], s.names[j]))
        # structure maps over a common polynomial base must commute
        for v in set(s.var_images) & set(t.var_images):
            lhs = self.apply(s.var_images[v])
            if not t.is_zero(t.sub(lhs, t.var_images[v])):
                raise ValueError("variable image %r not respected" % v)

    def __repr__(self):
        return "<hom %s -> %s>" % (self.source.label, self.target.label)


def quotient_hom(source, target):
    """Canonical reduction between Z/m-type algebras of the same shape.

    Works when the two algebras share basis monomial names and the target
    orders divide the source orders (e.g. Z/8 -> Z/4, F_2[x]/(x^2) -> F_2
    along killing x)."""
    images = []
    tnames = {n: i for i, n in enumerate(target.names)}
    for i, n in enumerate(source.names):
        if n in tnames:
            images.append(target._basis_vec(tnames[n]))
        else:
            images.append(target.zero())
    return AlgebraHom(source, target, images)


# ---------------------------------------------------------------------------
# the battery
# ---------------------------------------------------------------------------

BATTERY_VERSION = 1


def battery(base=None):
    """The versioned list of evaluation algebras, filtered to those that
    are algebras over the given base ring (all of them when base is None).

    >>> [b.label for b in battery(ZZ())][:3]
    ['Z/4', 'Z/6', 'Z/8']
    >>> [b.label for b in battery(Zmod(12))]
    ['Z/4', 'Z/6', 'F2', 'F2[x]/(x^2)', 'F3[s,t]/(deg>=2)', 'Z/4 x Z/3']
    """
    algs = _battery_algebras()
    if base is None:
        return algs
    out = []
    for b in algs:
        if b.is_algebra_over(base):
            out.append(b)
        elif base.tag == "Poly" and b.is_algebra_over(base.coeff):
            # every algebra over the coefficient ring receives F_p[vars]
            # by sending unmatched variables to 0
            images = {v: b.var_images.get(v, b.zero()) for v in base.vars}
            out.append(b.with_var_images(images))
    return out


def _battery_algebras():
    z4 = make_test_algebra(Zmod(4), (), label="Z/4")
    z6 = make_test_algebra(Zmod(6), (), label="Z/6")
    z8 = make_test_algebra(Zmod(8), (), label="Z/8")
    f2 = make_test_algebra(Fp(2), (), label="F2")
    f2x = make_test_algebra(Fp(2), ("x",), ideal=["x^2"], label="F2[x]/(x^2)")
    f3st = make_test_algebra(Fp(3), ("s", "t"), trunc=2, label="F3[s,t]/(deg>=2)")
    z4z3 = direct_product(make_test_algebra(Zmod(4), (), label="Z/4"),
                          make_test_algebra(Zmod(3), (), label="Z/3"),
                          label="Z/4 x Z/3")
    return [z4, z6, z8, f2, f2x, f3st, z4z3]


def battery_homs(base=None):
    """Homomorphisms among battery members, for naturality checks."""
    algs = {b.label: b for b in battery(base)}
    out = []

    def maybe(src, dst, make):
        if src in algs and dst in algs:
            out.append(make(algs[src], algs[dst]))

    maybe("Z/8", "Z/4", quotient_hom)
    maybe("Z/4", "F2", quotient_hom)
    maybe("Z/6", "F2", quotient_hom)
    maybe("F2[x]/(x^2)", "F2", quotient_hom)
    if "Z/4 x Z/3" in algs:
        prod = algs["Z/4 x Z/3"]
        if "Z/4" in algs:
            out.append(AlgebraHom(prod, algs["Z/4"],
                                  [algs["Z/4"]._basis_vec(0), algs["Z/4"].zero()]))
    return out
