"""Finitely presented modules and maps over Euclidean base rings.

A module is coker(relations: A^r -> A^g): `relations` has g rows, one per
generator.  Maps are matrices between generator spaces, checked well-defined
at construction.  Base rings: Z, F_p, F_p[x] directly; Z/m by lifting every
computation to Z and augmenting relation matrices with m*I.

Matrix entries are in ring representation (ints, or exponent dicts for
polynomials); conversion to the linalg ops layer happens at each call site.
FPModules over a multivariate base are legal containers (the evaluation
machinery uses them) but every Smith-based operation refuses them.
"""

import itertools
from math import comb

from .linalg import (
    IntOps, ModOps, PolyOps, smith_form, kernel_basis, solve, solve_matrix,
    mat_mul, mat_vec, mat_eq, identity, zero_matrix, hstack, vstack,
    block_diag, transpose,
)
from .rings import print_ring


def eu_ops(base):
    """linalg ops for presentation work; Z/m routes through Z."""
    if base.tag in ("Z", "Zmod"):
        return IntOps()
    if base.tag == "Fp":
        return ModOps(base.p)
    if base.tag == "Poly" and len(base.vars) == 1 and base.coeff.tag == "Fp":
        return PolyOps(base.coeff.p)
    raise ValueError("module calculus needs a Euclidean base, got %s"
                     % print_ring(base))


def to_ops_mat(base, a):
    return [[base.to_ops_elt(x) for x in row] for row in a]


def from_ops_mat(base, a):
    return [[base.from_ops_elt(x) for x in row] for row in a]


def _aug(base, ops, mat, rows):
    """Append m*I for a Z/m base so column spans are computed mod m."""
    if base.tag != "Zmod":
        return mat
    extra = [[base.m if i == j else 0 for j in range(rows)] for i in range(rows)]
    return hstack(mat, extra)


def rmat_mul(base, a, b):
    out = [[base.zero() for _ in range(len(b[0]) if b else 0)] for _ in a]
    for i, row in enumerate(a):
        for k, x in enumerate(row):
            if base.is_zero(x):
                continue
            for j, y in enumerate(b[k]):
                if not base.is_zero(y):
                    out[i][j] = base.add(out[i][j], base.mul(x, y))
    return out


def rmat_eq(base, a, b):
    if len(a) != len(b):
        return False
    for ra, rb in zip(a, b):
        if len(ra) != len(rb):
            return False
        if any(not base.is_zero(base.sub(x, y)) for x, y in zip(ra, rb)):
            return False
    return True


def rmat_identity(base, n):
    return [[base.one() if i == j else base.zero() for j in range(n)]
            for i in range(n)]


class FPModule:
    """coker(relations) with named base ring.

    >>> from funcoh.rings import ZZ
    >>> M = FPModule(ZZ(), 2, [[2, 0], [0, 4]])
    >>> M.invariant_factors()
    [2, 4]
    >>> FPModule.free(ZZ(), 3).invariant_factors()
    [0, 0, 0]
    """

    def __init__(self, base, gens, relations=None):
        self.base = base
        self.gens = gens
        rel = [list(r) for r in (relations or [[] for _ in range(gens)])]
        if gens and not rel:
            rel = [[] for _ in range(gens)]
        assert len(rel) == gens, "relations need one row per generator"
        ncols = len(rel[0]) if rel else 0
        assert all(len(r) == ncols for r in rel)
        self.relations = rel
        self.rels = ncols

    @staticmethod
    def free(base, n):
        return FPModule(base, n, [[] for _ in range(n)])

    @staticmethod
    def cyclic(base, ann_elt):
        """A/(a) as a module."""
        return FPModule(base, 1, [[ann_elt]])

    def is_euclidean(self):
        try:
            eu_ops(self.base)
            return True
        except ValueError:
            return False

    def invariant_factors(self):
        """Torsion divisor chain (units dropped) padded with 0 per free rank."""
        ops = eu_ops(self.base)
        mat = to_ops_mat(self.base, self.relations)
        mat = _aug(self.base, ops, mat, self.gens)
        if self.gens == 0:
            return []
        if not mat or not mat[0]:
            return [0] * self.gens
        _, _, d, _, _ = smith_form(ops, mat)
        diag = [d[i][i] for i in range(min(self.gens, len(d[0])))]
        out = []
        free = self.gens - len(diag)
        for x in diag:
            if ops.is_zero(x):
                free += 1
            elif not ops.is_unit(x):
                out.append(self.base.from_ops_elt(x) if self.base.tag == "Poly" else x)
        return out + [0] * free

    def is_zero_module(self):
        # invariant_factors drops units and keeps zeros, so empty == zero
        return not self.invariant_factors()

    def direct_sum(self, other):
        assert self.base == other.base
        ops = None  # block stacking needs no arithmetic
        rel = [row + [other.base.zero()] * other.rels for row in self.relations]
        rel += [[self.base.zero()] * self.rels + row for row in other.relations]
        return FPModule(self.base, self.gens + other.gens, rel)

    def tensor(self, other):
        """M (x) N presented on e_i(x)f_j, row-major in (i, j)."""
        assert self.base == other.base
        base = self.base
        g = self.gens * other.gens
        cols = []
        # relations of M tensored with each generator of N
        for c in range(self.rels):
            for j in range(other.gens):
                col = [base.zero()] * g
                for i in range(self.gens):
                    col[i * other.gens + j] = self.relations[i][c]
                cols.append(col)
        for c in range(other.rels):
            for i in range(self.gens):
                col = [base.zero()] * g
                for j in range(other.gens):
                    col[i * other.gens + j] = other.relations[j][c]
                cols.append(col)
        rel = [[cols[c][r] for c in range(len(cols))] for r in range(g)]
        return FPModule(base, g, rel)

    def minimized(self):
        """Isomorphic diagonal presentation with unit factors dropped.

        Report-level only; no comparison map is produced.
        """
        inv = self.invariant_factors()
        base = self.base
        cols = []
        for i, f in enumerate(inv):
            if f == 0:
                continue
            col = [base.zero()] * len(inv)
            col[i] = f
            cols.append(col)
        mat = [[c[i] for c in cols] for i in range(len(inv))]
        return FPModule(base, len(inv), mat)

    def to_json(self):
        from .rings import print_elt
        return {
            "base": print_ring(self.base),
            "gens": self.gens,
            "relations": {
                "rows": self.gens,
                "cols": self.rels,
                "entries": [print_elt(self.base, x) for row in self.relations
                            for x in row],
            },
        }

    def __repr__(self):
        return "FPModule(%s, gens=%d, rels=%d)" % (
            print_ring(self.base), self.gens, self.rels)


class ModuleMap:
    """matrix: target.gens x source.gens, checked to send relations into
    relations (by exact linear solve) at construction."""

    def __init__(self, source, target, matrix, check=True):
        assert source.base == target.base
        self.source = source
        self.target = target
        self.base = source.base
        m = [list(r) for r in matrix]
        assert len(m) == target.gens
        assert all(len(r) == source.gens for r in m)
        self.matrix = m
        if check and source.rels and not self._well_defined():
            raise ValueError("map does not respect relations")

    def _well_defined(self):
        base = self.base
        ops = eu_ops(base)
        img = rmat_mul(base, self.matrix, self.source.relations)
        tgt = _aug(base, ops, to_ops_mat(base, self.target.relations),
                   self.target.gens)
        img_ops = to_ops_mat(base, img)
        if not tgt or not tgt[0]:
            return all(ops.is_zero(x) for row in img_ops for x in row)
        return solve_matrix(ops, tgt, img_ops) is not None

    @staticmethod
    def identity_map(m):
        return ModuleMap(m, m, rmat_identity(m.base, m.gens), check=False)

    @staticmethod
    def zero_map(source, target):
        return ModuleMap(source, target,
                         [[source.base.zero()] * source.gens
                          for _ in range(target.gens)], check=False)

    def compose(self, other):
        """self after other."""
        assert other.target is self.source or rmat_eq(
            self.base, other.target.relations, self.source.relations)
        if self.source.gens == 0:
            # rmat_mul cannot recover the column count through 0 gens
            return ModuleMap.zero_map(other.source, self.target)
        return ModuleMap(other.source, self.target,
                         rmat_mul(self.base, self.matrix, other.matrix),
                         check=False)

    def add(self, other):
        assert self.source is other.source and self.target is other.target
        base = self.base
        return ModuleMap(self.source, self.target,
                         [[base.add(x, y) for x, y in zip(r1, r2)]
                          for r1, r2 in zip(self.matrix, other.matrix)],
                         check=False)

    def negate(self):
        base = self.base
        return ModuleMap(self.source, self.target,
                         [[base.neg(x) for x in row] for row in self.matrix],
                         check=False)

    def direct_sum(self, other):
        src = self.source.direct_sum(other.source)
        tgt = self.target.direct_sum(other.target)
        base = self.base
        rows = []
        for r in self.matrix:
            rows.append(list(r) + [base.zero()] * other.source.gens)
        for r in other.matrix:
            rows.append([base.zero()] * self.source.gens + list(r))
        return ModuleMap(src, tgt, rows, check=False)

    def is_zero_map(self):
        """Zero as a map of modules (image lands in target relations)."""
        base = self.base
        ops = eu_ops(base)
        tgt = _aug(base, ops, to_ops_mat(base, self.target.relations),
                   self.target.gens)
        img = to_ops_mat(base, self.matrix)
        if not tgt or not tgt[0]:
            return all(ops.is_zero(x) for row in img for x in row)
        return solve_matrix(ops, tgt, img) is not None

    def to_json(self):
        from .rings import print_elt
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "matrix": {
                "rows": self.target.gens,
                "cols": self.source.gens,
                "entries": [print_elt(self.base, x) for row in self.matrix
                            for x in row],
            },
        }

    def __repr__(self):
        return "ModuleMap(%d gens -> %d gens over %s)" % (
            self.source.gens, self.target.gens, print_ring(self.base))


# ---------------------------------------------------------------------------
# smith as a public operation
# ---------------------------------------------------------------------------

class SmithData:
    def __init__(self, u, d, v, uinv=None, vinv=None):
        self.U = u
        self.D = d
        self.V = v
        self.Uinv = uinv
        self.Vinv = vinv

    def diagonal(self):
        n = min(len(self.D), len(self.D[0]) if self.D else 0)
        return [self.D[i][i] for i in range(n)]


def smith(base, matrix):
    """Smith normal form over the base ring, ring-representation in and out.

    Over Z/m the decomposition is computed on integer lifts and reduced,
    which is a valid Smith form mod m (transforms stay unit-determinant).
    """
    if base.tag == "Zmod":
        ops = IntOps()
        u, uinv, d, v, vinv = smith_form(ops, matrix)
        red = lambda mat: [[x % base.m for x in row] for row in mat]
        return SmithData(red(u), red(d), red(v), red(uinv), red(vinv))
    ops = eu_ops(base)
    u, uinv, d, v, vinv = smith_form(ops, to_ops_mat(base, matrix))
    f = lambda mat: from_ops_mat(base, mat)
    return SmithData(f(u), f(d), f(v), f(uinv), f(vinv))


# ---------------------------------------------------------------------------
# kernels, cokernels, images, pushouts
# ---------------------------------------------------------------------------

def _preimage_gens(ops, phi, rel_aug, n_src):
    """Generators of {x in A^{n_src} : phi(x) in colspan(rel_aug)}."""
    if n_src == 0:
        return []
    if not phi:
        # zero-row matrix: the condition is empty
        return [[ops.one if i == j else ops.zero for i in range(n_src)]
                for j in range(n_src)]
    stacked = hstack(phi, rel_aug) if rel_aug and rel_aug[0] else phi
    kb = kernel_basis(ops, stacked)
    return [v[:n_src] for v in kb]


def kernel_of_map(f):
    """(K, inclusion K -> source) with K = ker(f) as a presented module.

    >>> from funcoh.rings import ZZ, Zmod
    >>> Z4 = FPModule(Zmod(4), 1, [[0]])
    >>> k, inc = kernel_of_map(ModuleMap(Z4, Z4, [[2]]))
    >>> k.invariant_factors()
    [2]
    """
    base = f.base
    ops = eu_ops(base)
    src_g = f.source.gens
    phi = to_ops_mat(base, f.matrix)
    tgt_rel = _aug(base, ops, to_ops_mat(base, f.target.relations), f.target.gens)
    pre = _preimage_gens(ops, phi, tgt_rel, src_g)
    # over Z/m the preimage submodule of (Z/m)^g also needs the lift vectors
    # m*e_i as explicit generators (they are 0 mod m but carry relations)
    if base.tag == "Zmod":
        pre = pre + [[base.m if i == j else 0 for i in range(src_g)]
                     for j in range(src_g)]
    if not pre:
        k = FPModule(base, 0, [])
        return k, ModuleMap(k, f.source, [[] for _ in range(src_g)],
                            check=False)
    gmat = [[pre[c][i] for c in range(len(pre))] for i in range(src_g)]
    src_rel = _aug(base, ops, to_ops_mat(base, f.source.relations), src_g)
    relcols = _preimage_gens(ops, gmat, src_rel, len(pre))
    relmat = [[relcols[c][i] for c in range(len(relcols))]
              for i in range(len(pre))]
    k = FPModule(base, len(pre), from_ops_mat(base, relmat))
    inc = ModuleMap(k, f.source, from_ops_mat(base, gmat), check=False)
    return k, inc


def cokernel_of_map(f):
    """(C, projection target -> C): append f's columns to the relations."""
    base = f.base
    rel = [list(r) + list(fr) for r, fr in zip(f.target.relations, f.matrix)]
    c = FPModule(base, f.target.gens, rel)
    proj = ModuleMap(f.target, c, rmat_identity(base, f.target.gens), check=False)
    return c, proj


def image_of_map(f):
    """(Im, epi source -> Im, mono Im -> target)."""
    k, inc = kernel_of_map(f)
    base = f.base
    rel = [list(r) + list(ir) for r, ir in zip(f.source.relations, inc.matrix)]
    im = FPModule(base, f.source.gens, rel)
    epi = ModuleMap(f.source, im, rmat_identity(base, f.source.gens), check=False)
    mono = ModuleMap(im, f.target, f.matrix, check=False)
    return im, epi, mono


def pushout(f, g):
    """Cofiber product of f: P -> M and g: P -> N.

    >>> from funcoh.rings import ZZ
    >>> Z = FPModule.free(ZZ(), 1)
    >>> d, im, in_ = pushout(ModuleMap(Z, Z, [[2]]), ModuleMap(Z, Z, [[3]]))
    >>> d.invariant_factors()
    [0]
    """
    assert f.source is g.source or rmat_eq(f.base, f.source.relations,
                                           g.source.relations)
    base = f.base
    m, n, p = f.target, g.target, f.source
    gens = m.gens + n.gens
    rel = []
    for i in range(m.gens):
        rel.append(list(m.relations[i]) + [base.zero()] * n.rels
                   + list(f.matrix[i]))
    for i in range(n.gens):
        rel.append([base.zero()] * m.rels + list(n.relations[i])
                   + [base.neg(x) for x in g.matrix[i]])
    d = FPModule(base, gens, rel)
    into_m = ModuleMap(m, d, [[base.one() if i == j else base.zero()
                               for j in range(m.gens)]
                              for i in range(gens)], check=False)
    into_n = ModuleMap(n, d, [[base.one() if i - m.gens == j else base.zero()
                               for j in range(n.gens)]
                              for i in range(gens)], check=False)
    return d, into_m, into_n


def invariant_factors(m):
    return m.invariant_factors()


def min_generators(m):
    """μ(M) over a local Euclidean base (F_p or Z/p^e): dim of M/rad·M.

    >>> from funcoh.rings import Zmod
    >>> min_generators(FPModule(Zmod(8), 2, [[2, 0], [0, 4]]))
    2
    """
    base = m.base
    if base.tag == "Fp":
        ops = ModOps(base.p)
        mat = to_ops_mat(base, m.relations)
        if not mat or not mat[0]:
            return m.gens
        _, _, d, _, _ = smith_form(ops, mat)
        rank = sum(1 for i in range(min(len(d), len(d[0])))
                   if not ops.is_zero(d[i][i]))
        return m.gens - rank
    if base.tag == "Zmod":
        mm = base.m
        p = None
        for q in range(2, mm + 1):
            if mm % q == 0:
                p = q
                break
        t = mm
        while t % p == 0:
            t //= p
        if t != 1:
            raise ValueError("Z/%d is not local" % mm)
        inv = m.invariant_factors()
        return len(inv)
    raise ValueError("min_generators needs a local base, got %s"
                     % print_ring(base))


def length_and_hs(d, n):
    """λ(A/m^{n+1}) for A = k[x_1..x_d] localized at the irrelevant ideal:
    the number of monomials of degree ≤ n in d variables.

    >>> length_and_hs(2, 3)
    10
    >>> length_and_hs(1, 7)
    8
    """
    return comb(n + d, d)


def cyclic_decomposition_tdvr(m):
    """Cyclic orders of M over Z/p^e, ascending.  Free generators get p^e.

    >>> from funcoh.rings import Zmod
    >>> cyclic_decomposition_tdvr(FPModule(Zmod(8), 2, [[2, 0], [0, 4]]))
    [2, 4]
    >>> cyclic_decomposition_tdvr(FPModule.free(Zmod(8), 2))
    [8, 8]
    """
    base = m.base
    if base.tag != "Zmod":
        raise ValueError("expected a Z/p^e base")
    mm = base.m
    p = None
    for q in range(2, mm + 1):
        if mm % q == 0:
            p = q
            break
    t = mm
    while t % p == 0:
        t //= p
    if t != 1:
        raise ValueError("modulus %d is not a prime power" % mm)
    inv = m.invariant_factors()
    return sorted(x for x in inv if x != 1)
