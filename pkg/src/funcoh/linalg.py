"""Exact matrix algebra over Euclidean rings, and integer lattice quotients.

Everything in this package that touches a matrix goes through here.  Matrices
are lists of lists of ring elements (ints, or coefficient tuples for
polynomials); there is no numpy anywhere, entries grow as big as they need to.

The Euclidean rings we support are described by small "ops" objects (IntOps,
ModOps, PolyOps) supplying arithmetic, division with remainder, a norm, and a
canonical associate.  One Smith normal form routine serves all of them.

Determinism contract: pivot selection takes the entry of smallest nonzero norm,
ties broken by (row, col) lexicographic position, and diagonal entries are
normalized to canonical associates (non-negative integers, monic polynomials).
Two runs on equal input produce identical U, D, V.
"""

from fractions import Fraction
import itertools


# ---------------------------------------------------------------------------
# element ops
# ---------------------------------------------------------------------------

class IntOps:
    """Arithmetic of Z.  Elements are python ints."""

    name = "Z"
    euclidean = True

    zero = 0
    one = 1

    def is_zero(self, a):
        return a == 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def divmod_(self, a, b):
        # symmetric remainder |r| <= |b|/2 keeps entries small during
        # elimination; python's floor remainder has the sign of b, so the
        # adjustment is always one step up
        q, r = divmod(a, b)
        if 2 * abs(r) > abs(b):
            q += 1
            r -= b
        return q, r

    def norm(self, a):
        return abs(a)

    def is_unit(self, a):
        return a in (1, -1)

    def inv_unit(self, a):
        return a

    def normalize(self, a):
        """Return (canonical associate, unit u) with a = u * canonical."""
        if a < 0:
            return -a, -1
        return a, 1


class ModOps:
    """Arithmetic of Z/m.  Elements are ints in [0, m).

    For prime m this is a field and fully Euclidean.  For composite m the
    ring is not a domain, so `euclidean` is False and smith_form refuses it;
    module calculus over Z/m lifts to Z with an m*I augmentation instead
    (see modules.py).  divmod_ is divide-if-divisible: (q, 0) when b | a in
    Z/m, else (0, a), which is what diagonal solving needs.
    """

    def __init__(self, m):
        assert m >= 2
        self.m = m
        self.name = "Z/%d" % m
        self.euclidean = all(m % d for d in range(2, int(m ** 0.5) + 1))

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def is_zero(self, a):
        return a % self.m == 0

    def add(self, a, b):
        return (a + b) % self.m

    def sub(self, a, b):
        return (a - b) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def neg(self, a):
        return (-a) % self.m

    def divmod_(self, a, b):
        from math import gcd
        a %= self.m
        b %= self.m
        assert b != 0
        g = gcd(b, self.m)
        if a % g:
            return 0, a
        q = ((a // g) * pow(b // g, -1, self.m // g)) % self.m
        return q, 0

    def norm(self, a):
        return a % self.m

    def is_unit(self, a):
        from math import gcd
        return gcd(a, self.m) == 1

    def inv_unit(self, a):
        return pow(a, -1, self.m)

    def normalize(self, a):
        a %= self.m
        return a, 1


class PolyOps:
    """Arithmetic of F_p[x].  Elements are coefficient tuples, low degree first.

    The zero polynomial is the empty tuple.  Everything is kept trimmed, so
    equality of tuples is equality of polynomials.
    """

    euclidean = True

    def __init__(self, p):
        self.p = p
        self.name = "F%d[x]" % p

    zero = ()
    one = (1,)

    def _trim(self, c):
        c = list(c)
        while c and c[-1] % self.p == 0:
            c.pop()
        return tuple(x % self.p for x in c)

    def from_int(self, n):
        return self._trim((n,))

    def is_zero(self, a):
        return len(a) == 0

    def add(self, a, b):
        n = max(len(a), len(b))
        return self._trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                           for i in range(n)])

    def sub(self, a, b):
        n = max(len(a), len(b))
        return self._trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                           for i in range(n)])

    def mul(self, a, b):
        if not a or not b:
            return ()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return self._trim(out)

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def divmod_(self, a, b):
        assert b, "division by zero polynomial"
        p = self.p
        binv = pow(b[-1], -1, p)
        r = list(a)
        q = [0] * max(len(a) - len(b) + 1, 0)
        while len(r) >= len(b):
            c = (r[-1] * binv) % p
            d = len(r) - len(b)
            q[d] = c
            for i, bi in enumerate(b):
                r[d + i] = (r[d + i] - c * bi) % p
            while r and r[-1] % p == 0:
                r.pop()
        return self._trim(q), self._trim(r)

    def norm(self, a):
        # degree + 1; zero gets 0 so nonzero entries always beat it
        return len(a)

    def is_unit(self, a):
        return len(a) == 1

    def inv_unit(self, a):
        return (pow(a[0], -1, self.p),)

    def normalize(self, a):
        if not a:
            return (), (1,)
        u = (a[-1],)
        uinv = self.inv_unit(u)
        return self.mul(uinv, a), u


# ---------------------------------------------------------------------------
# matrix basics
# ---------------------------------------------------------------------------

def identity(ops, n):
    return [[ops.one if i == j else ops.zero for j in range(n)] for i in range(n)]


def zero_matrix(ops, rows, cols):
    return [[ops.zero for _ in range(cols)] for _ in range(rows)]


def mat_copy(a):
    return [row[:] for row in a]


def mat_mul(ops, a, b):
    rows, mid, cols = len(a), len(b), (len(b[0]) if b else 0)
    if a:
        assert len(a[0]) == mid, "shape mismatch %dx%d * %dx%d" % (rows, len(a[0]), mid, cols)
    out = zero_matrix(ops, rows, cols)
    for i in range(rows):
        ai = a[i]
        for k in range(mid):
            x = ai[k]
            if ops.is_zero(x):
                continue
            bk = b[k]
            oi = out[i]
            for j in range(cols):
                if not ops.is_zero(bk[j]):
                    oi[j] = ops.add(oi[j], ops.mul(x, bk[j]))
    return out


def mat_vec(ops, a, v):
    assert not a or len(a[0]) == len(v)
    return [
        _dot(ops, row, v)
        for row in a
    ]


def _dot(ops, row, v):
    s = ops.zero
    for x, y in zip(row, v):
        if not (ops.is_zero(x) or ops.is_zero(y)):
            s = ops.add(s, ops.mul(x, y))
    return s


def mat_eq(ops, a, b):
    if len(a) != len(b):
        return False
    for ra, rb in zip(a, b):
        if len(ra) != len(rb):
            return False
        for x, y in zip(ra, rb):
            if not ops.is_zero(ops.sub(x, y)):
                return False
    return True


def is_zero_matrix(ops, a):
    return all(ops.is_zero(x) for row in a for x in row)


def transpose(a):
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def block_diag(ops, a, b):
    ra, ca = len(a), (len(a[0]) if a else 0)
    rb, cb = len(b), (len(b[0]) if b else 0)
    out = zero_matrix(ops, ra + rb, ca + cb)
    for i in range(ra):
        out[i][:ca] = [x for x in a[i]]
    for i in range(rb):
        out[ra + i][ca:] = [x for x in b[i]]
    return out


def hstack(a, b):
    """[A | B], same row count."""
    if not a:
        return mat_copy(b)
    if not b:
        return mat_copy(a)
    assert len(a) == len(b)
    return [ra + rb for ra, rb in zip(a, b)]


def vstack(a, b):
    if not a:
        return mat_copy(b)
    if not b:
        return mat_copy(a)
    assert len(a[0]) == len(b[0])
    return mat_copy(a) + mat_copy(b)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def smith_form(ops, a):
    """Smith normal form with transforms.

    Returns (U, Uinv, D, V, Vinv) with U*A*V = D, D diagonal with each
    diagonal entry dividing the next, entries canonical associates.  U and V
    are products of elementary matrices, so unit determinant; Uinv, Vinv are
    their exact inverses (maintained alongside, not recomputed).

    >>> U, Ui, D, V, Vi = smith_form(IntOps(), [[2, 4], [6, 8]])
    >>> [D[0][0], D[1][1]]
    [2, 4]
    >>> mat_eq(IntOps(), mat_mul(IntOps(), mat_mul(IntOps(), U, [[2, 4], [6, 8]]), V), D)
    True
    """
    assert getattr(ops, "euclidean", False), "smith_form needs a Euclidean ops"
    rows = len(a)
    cols = len(a[0]) if a else 0
    d = mat_copy(a)
    u = identity(ops, rows)
    uinv = identity(ops, rows)
    v = identity(ops, cols)
    vinv = identity(ops, cols)

    def row_op(i, j, c):
        # row_i += c * row_j  on d and u;  col_j -= c * col_i  on uinv
        for k in range(cols):
            d[i][k] = ops.add(d[i][k], ops.mul(c, d[j][k]))
        for k in range(rows):
            u[i][k] = ops.add(u[i][k], ops.mul(c, u[j][k]))
            uinv[k][j] = ops.sub(uinv[k][j], ops.mul(c, uinv[k][i]))

    def col_op(i, j, c):
        # col_i += c * col_j  on d and v;  row_j -= c * row_i  on vinv
        for k in range(rows):
            d[k][i] = ops.add(d[k][i], ops.mul(c, d[k][j]))
        for k in range(cols):
            v[k][i] = ops.add(v[k][i], ops.mul(c, v[k][j]))
            vinv[j][k] = ops.sub(vinv[j][k], ops.mul(c, vinv[i][k]))

    def row_swap(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]
        for k in range(rows):
            uinv[k][i], uinv[k][j] = uinv[k][j], uinv[k][i]

    def col_swap(i, j):
        for k in range(rows):
            d[k][i], d[k][j] = d[k][j], d[k][i]
        for k in range(cols):
            v[k][i], v[k][j] = v[k][j], v[k][i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def row_scale(i, unit):
        # multiply row i by a unit
        ui = ops.inv_unit(unit)
        for k in range(cols):
            d[i][k] = ops.mul(unit, d[i][k])
        for k in range(rows):
            u[i][k] = ops.mul(unit, u[i][k])
            uinv[k][i] = ops.mul(uinv[k][i], ui)

    def pivot_at(t):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if not ops.is_zero(d[i][j]):
                    key = (ops.norm(d[i][j]), i, j)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        return None if best is None else (best[1], best[2])

    t = 0
    while t < min(rows, cols):
        loc = pivot_at(t)
        if loc is None:
            break
        pi, pj = loc
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        # clear column t then row t; restart if a remainder shrinks the pivot
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                if ops.is_zero(d[i][t]):
                    continue
                q, r = ops.divmod_(d[i][t], d[t][t])
                row_op(i, t, ops.neg(q))
                if not ops.is_zero(r):
                    row_swap(t, i)
                    dirty = True
            for j in range(t + 1, cols):
                if ops.is_zero(d[t][j]):
                    continue
                q, r = ops.divmod_(d[t][j], d[t][t])
                col_op(j, t, ops.neg(q))
                if not ops.is_zero(r):
                    col_swap(t, j)
                    dirty = True
        t += 1

    rank = t

    def rediag(t0):
        # the 2x2 block at t0 was mixed; restore diagonal form, gcd lands
        # at (t0, t0).  Smallest-norm pivot, remainders strictly shrink.
        while True:
            best = None
            for i in (t0, t0 + 1):
                for j in (t0, t0 + 1):
                    if not ops.is_zero(d[i][j]):
                        key = (ops.norm(d[i][j]), i, j)
                        if best is None or key < best[0]:
                            best = (key, i, j)
            if best is None:
                return
            _, bi, bj = best
            if bi != t0:
                row_swap(t0, bi)
            if bj != t0:
                col_swap(t0, bj)
            if not ops.is_zero(d[t0 + 1][t0]):
                q, _ = ops.divmod_(d[t0 + 1][t0], d[t0][t0])
                row_op(t0 + 1, t0, ops.neg(q))
            if not ops.is_zero(d[t0][t0 + 1]):
                q, _ = ops.divmod_(d[t0][t0 + 1], d[t0][t0])
                col_op(t0 + 1, t0, ops.neg(q))
            if ops.is_zero(d[t0 + 1][t0]) and ops.is_zero(d[t0][t0 + 1]):
                return

    # divisibility fix-up: fold d[i+1][i+1] into column i whenever
    # d[i][i] fails to divide it, then re-diagonalize the block
    changed = True
    while changed:
        changed = False
        for i in range(rank - 1):
            _, r = ops.divmod_(d[i + 1][i + 1], d[i][i])
            if ops.is_zero(r):
                continue
            changed = True
            col_op(i, i + 1, ops.one)
            rediag(i)

    for i in range(rank):
        canon, unit = ops.normalize(d[i][i])
        if not ops.is_zero(ops.sub(canon, d[i][i])):
            row_scale(i, ops.inv_unit(unit))
    return u, uinv, d, v, vinv


def smith_diagonal(ops, a):
    _, _, d, _, _ = smith_form(ops, a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))
            if not ops.is_zero(d[i][i])]


def rank_of(ops, a):
    return len(smith_diagonal(ops, a))


def determinant(ops, a):
    """Determinant via fraction-free elimination is overkill here; we only
    need it for small matrices in tests, so expand by Smith with sign from
    the transforms' parity is fiddly.  Cofactor expansion, n <= 6."""
    n = len(a)
    assert all(len(r) == n for r in a)
    if n == 0:
        return ops.one
    if n == 1:
        return a[0][0]
    det = ops.zero
    sign = ops.one
    for j in range(n):
        if not ops.is_zero(a[0][j]):
            minor = [[a[i][k] for k in range(n) if k != j] for i in range(1, n)]
            det = ops.add(det, ops.mul(ops.mul(sign, a[0][j]), determinant(ops, minor)))
        sign = ops.neg(sign)
    return det


def kernel_basis(ops, a):
    """Basis of ker(a) acting on column vectors, as a list of vectors.

    Columns of V beyond the rank (or hitting a zero diagonal entry) give the
    kernel: A*V has zero columns there and V is invertible.  Over a domain
    this is exactly the kernel; ModOps callers must augment first.
    """
    rows = len(a)
    cols = len(a[0]) if a else 0
    if cols == 0:
        return []
    if rows == 0:
        return [[ops.one if i == j else ops.zero for i in range(cols)] for j in range(cols)]
    _, _, d, v, _ = smith_form(ops, a)
    out = []
    for j in range(cols):
        if j >= rows or ops.is_zero(d[j][j]):
            out.append([v[i][j] for i in range(cols)])
    return out


def solve(ops, a, b):
    """One solution x of A x = b over the ring, or None.

    With U A V = D: set y = U b, need D z = y (divisibility checks), x = V z.
    """
    rows = len(a)
    cols = len(a[0]) if a else 0
    assert len(b) == rows
    if cols == 0:
        return [] if all(ops.is_zero(x) for x in b) else None
    u, _, d, v, _ = smith_form(ops, a)
    y = mat_vec(ops, u, b)
    z = [ops.zero] * cols
    for i in range(rows):
        di = d[i][i] if i < cols else ops.zero
        if ops.is_zero(di):
            if not ops.is_zero(y[i]):
                return None
        else:
            q, r = ops.divmod_(y[i], di)
            if not ops.is_zero(r):
                return None
            z[i] = q
    return mat_vec(ops, v, z)


def solve_matrix(ops, a, b):
    """Solve A X = B columnwise; None if any column fails."""
    cols_b = len(b[0]) if b else 0
    xcols = []
    for j in range(cols_b):
        x = solve(ops, a, [row[j] for row in b])
        if x is None:
            return None
        xcols.append(x)
    if not xcols:
        return [[] for _ in range(len(a[0]) if a else 0)]
    return [[xcols[j][i] for j in range(cols_b)] for i in range(len(xcols[0]))]


# ---------------------------------------------------------------------------
# integer lattices
# ---------------------------------------------------------------------------

_ZOPS = IntOps()


def lattice_basis(gens, n):
    """Basis (as rows) of the sublattice of Z^n spanned by gens (rows).

    Via column-style Hermite reduction of the matrix with gens as rows:
    Smith is more than needed but gives a clean deterministic answer; we
    use row echelon over Z (Hermite) to keep entries interpretable.
    """
    rows = [list(g) for g in gens if any(g)]
    if not rows:
        return []
    m = hermite_rows(rows, n)
    return m


def hermite_rows(rows, n):
    """Row Hermite normal form of the lattice spanned by rows in Z^n.

    Pivots positive, entries above a pivot reduced to [0, pivot).  Rows of
    zeros dropped.  Deterministic.
    """
    mat = [list(r) for r in rows]
    assert all(len(r) == n for r in mat)
    out = []
    col = 0
    while col < n and mat:
        # gcd-reduce the column
        nz = [r for r in mat if r[col] != 0]
        z = [r for r in mat if r[col] == 0]
        if not nz:
            mat = z
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            base = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // base[col]
                rr = [x - q * y for x, y in zip(r, base)]
                if rr[col] != 0:
                    rest.append(rr)
                elif any(rr):
                    z.append(rr)
            nz = [base] + rest
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        # reduce earlier pivot rows against this one
        for r in out:
            if r[col] != 0:
                q = r[col] // piv[col]
                for k in range(n):
                    r[k] -= q * piv[k]
        out.append(piv)
        mat = z
        col += 1
    return out


def lattice_membership(basis_rows, v):
    """Is v in the lattice spanned by basis_rows?  basis_rows from hermite_rows."""
    v = list(v)
    n = len(v)
    for r in basis_rows:
        # leading column of r
        lead = next(i for i in range(n) if r[i] != 0)
        if v[lead] % r[lead] == 0:
            q = v[lead] // r[lead]
            for k in range(n):
                v[k] -= q * r[k]
        # else fall through; leftover at lead will be caught below
    return all(x == 0 for x in v)


class QuotientLattice:
    """A finitely generated abelian group K/L, for lattices L <= K <= Z^n.

    K and L are given by generating sets of vectors in Z^n.  Internally we
    pick a basis of K, rewrite L in K-coordinates, and Smith-decompose, so
    the group is Z/d_1 x ... x Z/d_r x Z^f with the d_i a divisor chain.
    Elements are represented by their ambient vectors in Z^n; canon() maps
    to digit tuples in the Smith coordinates.

    >>> Q = QuotientLattice(2, [[1, 0], [0, 1]], [[2, 0], [0, 3]])
    >>> Q.invariants
    [6]
    >>> Q.free_rank
    0
    >>> Q.order()
    6
    """

    def __init__(self, n, k_gens, l_gens):
        self.n = n
        self.l_gens = [list(g) for g in l_gens]
        self.k_basis = hermite_rows([list(g) for g in k_gens if any(g)], n) if k_gens else []
        r = len(self.k_basis)
        self._k_leads = [next(i for i in range(n) if row[i] != 0)
                         for row in self.k_basis]
        # L in K-coordinates.  Hermite-reduce the generating set first
        # (the quotient only sees the lattice L, not the generator list)
        # and back-substitute against the echelon K basis.
        lred = hermite_rows([list(g) for g in l_gens if any(g)], n) \
            if l_gens else []
        l_in_k = []
        for l in lred:
            x = self._solve_k(l)
            assert x is not None, "L generator outside K"
            l_in_k.append(x)
        self.l_in_k = l_in_k
        if r == 0:
            self._u = []
            self._uinv = []
            self._diag = []
        else:
            mat = transpose(l_in_k) if l_in_k else zero_matrix(_ZOPS, r, 1)
            # columns of mat = L-generators in K-coords; smith of r x s
            u, uinv, d, _, _ = smith_form(_ZOPS, mat)
            self._u = u
            self._uinv = uinv
            self._diag = [d[i][i] if i < (len(d[0]) if d else 0) else 0 for i in range(r)]
        self.invariants = [d for d in self._diag if d not in (0, 1)]
        self.free_rank = sum(1 for d in self._diag if d == 0)

    def order(self):
        if self.free_rank:
            return None
        out = 1
        for d in self.invariants:
            out *= d
        return out

    def _solve_k(self, v):
        """Coordinates of v against the echelon K basis, or None.

        Rows are in staircase form (later rows vanish on earlier pivot
        columns), so the coefficients peel off front to back.
        """
        v = list(v)
        x = []
        for lead, row in zip(self._k_leads, self.k_basis):
            c = v[lead]
            if c % row[lead]:
                return None
            q = c // row[lead]
            x.append(q)
            if q:
                for i in range(lead, self.n):
                    v[i] -= q * row[i]
        return x if all(c == 0 for c in v) else None

    def _to_k_coords(self, v):
        x = self._solve_k(v)
        if x is None:
            raise ValueError("vector not in K")
        return x

    def canon(self, v):
        """Canonical digits of v + L: tuple, torsion digits in [0, d), free last."""
        x = self._to_k_coords(v)
        y = mat_vec(_ZOPS, self._u, x)
        digits = []
        frees = []
        for d, yi in zip(self._diag, y):
            if d == 0:
                frees.append(yi)
            elif d == 1:
                continue
            else:
                digits.append(yi % d)
        return tuple(digits + frees)

    def is_zero(self, v):
        return all(c == 0 for c in self.canon(v))

    def same_class(self, v, w):
        return self.canon(v) == self.canon(w)

    def contains_ambient(self, v):
        """Is v in K at all?"""
        return self._solve_k(list(v)) is not None

    def enumerate(self, cap=100000):
        """All elements as ambient representatives; None if infinite or > cap."""
        if self.free_rank:
            return None
        total = self.order()
        if total > cap:
            return None
        # representative of digit tuple: pull back through uinv
        reps = []
        axes = []
        for i, d in enumerate(self._diag):
            if d not in (0, 1):
                axes.append((i, d))
        for combo in itertools.product(*[range(d) for _, d in axes]):
            y = [0] * len(self._diag)
            for (i, _), c in zip(axes, combo):
                y[i] = c
            x = mat_vec(_ZOPS, self._uinv, y)
            amb = [0] * self.n
            for coef, row in zip(x, self.k_basis):
                for k in range(self.n):
                    amb[k] += coef * row[k]
            reps.append(amb)
        return reps


def fp_echelon(p, a):
    """Row-reduce a over F_p in place semantics; returns (echelon, pivots)."""
    m = [[x % p for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def fp_rank(p, a):
    return len(fp_echelon(p, a)[1])


def fp_nullspace(p, a):
    """Basis of the right nullspace of a over F_p (list of vectors)."""
    cols = len(a[0]) if a else 0
    if not a:
        return []
    m, pivots = fp_echelon(p, a)
    pivset = set(pivots)
    basis = []
    for c in range(cols):
        if c in pivset:
            continue
        v = [0] * cols
        v[c] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-m[r][c]) % p
        basis.append(v)
    return basis


def fraction_matrix_rank(a):
    """Rank over Q of an integer (or Fraction) matrix; used by oracles."""
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    rank = 0
    for col in range(cols):
        piv = None
        for i in range(rank, rows):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for i in range(rows):
            if i != rank and m[i][col] != 0:
                c = m[i][col]
                m[i] = [x - c * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank
