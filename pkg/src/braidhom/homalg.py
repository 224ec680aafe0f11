"""Free bigraded complexes over Q[U_1..U_k] and their exact homology.

Gradings follow the quantum/horizontal convention: multiplication by a
variable adds {2,0}, the Koszul differential d_+ is homogeneous of bidegree
{2,2}, and matrix-factorization back arrows d_- have bidegree {2n,-2}.
Homology dimensions are exact: at a fixed bigrading the chain groups are
finite dimensional (generator times monomial bases) and the reported window
only limits what is printed, never correctness.

Linear algebra is exact rational elimination on sparse rows.  Structured
Koszul data is reduced before any matrix work: same-shape factors are
combined linearly to expose zero entries, zero factors split off as free
towers, and regular linear entries are contracted by eliminating a
variable.  The same moves apply to two-differential tensors, where a linear
d_+ entry is excluded together with its back arrow (the x side transforms
by an invertible matrix and the y side by its inverse transpose, which
preserves the tensor up to isomorphism and keeps the potential).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .multipoly import MultiLaurent, QQ


# ---------------------------------------------------------------------------
# sparse exact linear algebra

class RREF:
    """Incremental echelon accumulator over sparse rational rows.

    Stored rows are pivot-normalized.  A row may carry an auxiliary sparse
    vector transformed alongside it, so kernels and quotient coordinates
    come out of one primitive.
    """

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots = {}          # pivot key -> (rowdict, auxdict or None)

    def reduce(self, vec: dict, aux: dict | None = None):
        vec = dict(vec)
        aux = dict(aux) if aux is not None else None
        while vec:
            c = min(vec)
            hit = self.pivots.get(c)
            if hit is None:
                return vec, aux
            row, raux = hit
            lam = vec[c]
            for cc, v in row.items():
                s = vec.get(cc, QQ(0)) - lam * v
                if s == 0:
                    vec.pop(cc, None)
                else:
                    vec[cc] = s
            if aux is not None and raux is not None:
                for cc, v in raux.items():
                    s = aux.get(cc, QQ(0)) - lam * v
                    if s == 0:
                        aux.pop(cc, None)
                    else:
                        aux[cc] = s
        return {}, aux

    def insert(self, vec: dict, aux: dict | None = None):
        """Returns the pivot key, or None when vec was dependent."""
        vec, aux = self.reduce(vec, aux)
        if not vec:
            return None, aux
        c = min(vec)
        inv = QQ(1) / vec[c]
        row = {cc: v * inv for cc, v in vec.items()}
        raux = ({cc: v * inv for cc, v in aux.items()}
                if aux is not None else None)
        self.pivots[c] = (row, raux)
        return c, aux

    @property
    def rank(self) -> int:
        return len(self.pivots)


def sparse_rank(cols) -> int:
    r = RREF()
    for vec in cols:
        if vec:
            r.insert(vec)
    return r.rank


def kernel_basis(cols) -> list:
    """Kernel combinations of the given sparse columns."""
    r = RREF()
    out = []
    for j, vec in enumerate(cols):
        piv, aux = r.insert(vec, {j: QQ(1)})
        if piv is None:
            out.append(aux)
    return out


# ---------------------------------------------------------------------------
# dimension tables

@dataclass
class DimTable:
    """Exact bigraded dimensions with a declared q-validity bound.

    qmax_valid None means the table is complete.  Entries above the bound
    are never stored.
    """

    entries: dict = field(default_factory=dict)
    qmax_valid: int | None = None

    def get(self, q: int, h: int) -> int:
        return self.entries.get((q, h), 0)

    def min_q(self):
        return min((q for (q, _h) in self.entries), default=None)

    def h_values(self):
        return sorted({h for (_q, h) in self.entries})

    def total_dim(self) -> int:
        return sum(self.entries.values())

    def is_complete(self) -> bool:
        return self.qmax_valid is None

    def _trim(self):
        if self.qmax_valid is not None:
            self.entries = {k: v for k, v in self.entries.items()
                            if k[0] <= self.qmax_valid}
        return self

    def add(self, other: "DimTable") -> "DimTable":
        v = _min_valid(self.qmax_valid, other.qmax_valid)
        out = dict(self.entries)
        for k, d in other.entries.items():
            out[k] = out.get(k, 0) + d
        return DimTable(out, v)._trim()

    def shift(self, dq: int, dh: int) -> "DimTable":
        v = None if self.qmax_valid is None else self.qmax_valid + dq
        return DimTable({(q + dq, h + dh): d
                         for (q, h), d in self.entries.items()}, v)

    def regrade(self, k: int) -> "DimTable":
        """H<k>: the entry at (q, h) moves to (q + k*h, h)."""
        ents = {(q + k * h, h): d for (q, h), d in self.entries.items()}
        if self.qmax_valid is None:
            v = None
        else:
            hs = {h for (_q, h) in self.entries}
            v = min((self.qmax_valid + k * h for h in hs),
                    default=self.qmax_valid)
        return DimTable(ents, v)._trim()

    def convolve(self, other: "DimTable") -> "DimTable":
        """Tensor product of bigraded spaces (dimension convolution)."""
        bounds = []
        if self.qmax_valid is not None:
            m = other.min_q()
            bounds.append(self.qmax_valid + (m if m is not None else 0))
        if other.qmax_valid is not None:
            m = self.min_q()
            bounds.append(other.qmax_valid + (m if m is not None else 0))
        v = min(bounds) if bounds else None
        ents = {}
        for (q1, h1), d1 in self.entries.items():
            for (q2, h2), d2 in other.entries.items():
                k = (q1 + q2, h1 + h2)
                ents[k] = ents.get(k, 0) + d1 * d2
        return DimTable(ents, v)._trim()

    def truncated(self, qmax: int) -> "DimTable":
        ents = {k: v for k, v in self.entries.items() if k[0] <= qmax}
        return DimTable(ents, _min_valid(self.qmax_valid, qmax))

    def to_tsv(self) -> str:
        hs = self.h_values()
        if not hs:
            return "gr_q\\gr_h\n"
        qs = sorted({q for (q, _h) in self.entries})
        lines = ["gr_q\\gr_h\t" + "\t".join(str(h) for h in hs)]
        for q in qs:
            lines.append("\t".join([str(q)] + [str(self.get(q, h))
                                               for h in hs]))
        return "\n".join(lines) + "\n"

    def to_json_obj(self):
        return {
            "schema": 1,
            "qmax_valid": self.qmax_valid,
            "dims": [[q, h, d] for (q, h), d in sorted(self.entries.items())],
        }


def _min_valid(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def table_point(q: int, h: int, dim: int = 1) -> DimTable:
    return DimTable({(q, h): dim} if dim else {}, None)


def zero_table() -> DimTable:
    return DimTable({}, None)


def equal_up_to_shift(A: DimTable, B: DimTable):
    """Compare two tables up to one global bigrading shift.

    Returns (ok, shift, qbound): A equals B shifted by `shift` on every
    bigrading with q <= qbound.  The candidate shift is anchored at the
    lowest supported horizontal row and its lowest q entry.
    """
    if not A.entries and not B.entries:
        return True, (0, 0), None
    if not A.entries or not B.entries:
        return False, None, None
    ha = min(h for (_q, h) in A.entries)
    hb = min(h for (_q, h) in B.entries)
    qa = min(q for (q, h) in A.entries if h == ha)
    qb = min(q for (q, h) in B.entries if h == hb)
    shift = (qa - qb, ha - hb)
    Bs = B.shift(*shift)
    bound = _min_valid(A.qmax_valid, Bs.qmax_valid)

    def within(k):
        return bound is None or k[0] <= bound

    for k, d in A.entries.items():
        if within(k) and Bs.entries.get(k, 0) != d:
            return False, shift, bound
    for k, d in Bs.entries.items():
        if within(k) and A.entries.get(k, 0) != d:
            return False, shift, bound
    return True, shift, bound


def euler_characteristic(T: DimTable, track_h: bool = False) -> MultiLaurent:
    """Sum of (-1)^(h/2) dim q^q, optionally tagging a^h."""
    vars = ("q", "a") if track_h else ("q",)
    out = MultiLaurent.zero(vars)
    for (q, h), d in T.entries.items():
        sign = -1 if (h // 2) % 2 else 1
        exps = (q, h) if track_h else (q,)
        out = out + MultiLaurent.monomial(vars, exps, sign * d)
    return out


def poincare_polynomial(T: DimTable, grading_n: int) -> MultiLaurent:
    """Poincare polynomial in the single grading gr_n = gr_q + (n-1)gr_h/2."""
    out = MultiLaurent.zero(("q",))
    for (q, h), d in T.entries.items():
        g = q + (grading_n - 1) * (h // 2)
        out = out + MultiLaurent.monomial(("q",), (g,), d)
    return out


def support_certified(T: DimTable, slack: int = 4) -> bool:
    """Finite-support certificate: support stays below the valid bound."""
    if T.is_complete():
        return True
    top = max((q for (q, _h) in T.entries), default=None)
    return top is None or top + slack <= T.qmax_valid


# ---------------------------------------------------------------------------
# monomial bases

@lru_cache(maxsize=None)
def monomials(k: int, d: int):
    """All exponent tuples of total degree d in k variables."""
    if d < 0:
        return ()
    if k == 0:
        return ((),) if d == 0 else ()
    if k == 1:
        return ((d,),)
    out = []
    for first in range(d + 1):
        for rest in monomials(k - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def free_rank(k: int, d: int) -> int:
    if d < 0:
        return 0
    if k == 0:
        return 1 if d == 0 else 0
    n = 1
    for i in range(1, k):
        n = n * (d + i) // i
    return n


def free_table(k: int, shift, qmax: int) -> DimTable:
    """Dimensions of a free rank-one module R{shift} up to qmax."""
    sq, sh = shift
    ents = {}
    t = 0
    while sq + 2 * t <= qmax:
        d = free_rank(k, t)
        if d:
            ents[(sq + 2 * t, sh)] = d
        t += 1
    return DimTable(ents, qmax)


def hypersurface_table(k: int, deg: int, shift, qmax: int) -> DimTable:
    """Dimensions of R/(x) for a nonzero element of the given degree."""
    sq, sh = shift
    ents = {}
    t = 0
    while sq + 2 * t <= qmax:
        d = free_rank(k, t) - free_rank(k, t - deg)
        if d:
            ents[(sq + 2 * t, sh)] = d
        t += 1
    return DimTable(ents, qmax)


# ---------------------------------------------------------------------------
# explicit complexes

@dataclass(eq=False)
class GradedComplex:
    """Free bigraded complex with polynomial differential of bidegree {2,2}.

    dcols[j] lists (i, poly) with d(g_j) = sum poly * g_i.
    """

    vars: tuple
    gens: tuple                   # ((q, h), ...)
    dcols: dict
    _blocks: dict = field(default_factory=dict, repr=False)

    def degree_check(self, bidegree=(2, 2)):
        dq, dh = bidegree
        for j, col in self.dcols.items():
            qj, hj = self.gens[j]
            for i, p in col:
                if p.is_zero():
                    continue
                if not p.is_homogeneous():
                    raise ValueError("inhomogeneous differential entry")
                qi, hi = self.gens[i]
                if hi != hj + dh or qi + 2 * p.total_degree() != qj + dq:
                    raise ValueError("entry violates the declared bidegree")

    def compose_is_zero(self, first=None) -> bool:
        """self.d applied after `first` vanishes; defaults to d^2 = 0."""
        first = first if first is not None else self.dcols
        zero = MultiLaurent.zero(self.vars)
        for j in range(len(self.gens)):
            acc = {}
            for i, p in first.get(j, ()):
                for i2, p2 in self.dcols.get(i, ()):
                    acc[i2] = acc.get(i2, zero) + p2 * p
            if any(not v.is_zero() for v in acc.values()):
                return False
        return True

    def shift(self, dq: int, dh: int) -> "GradedComplex":
        return GradedComplex(self.vars,
                             tuple((q + dq, h + dh) for (q, h) in self.gens),
                             self.dcols)

    def h_range(self):
        hs = [h for (_q, h) in self.gens]
        return (min(hs), max(hs)) if hs else (0, 0)

    def min_q(self):
        return min((q for (q, _h) in self.gens), default=0)

    # -- per-bigrading blocks ---------------------------------------------

    def block(self, q: int, h: int):
        """Chain-group basis at (q, h): (generator index, monomial)."""
        key = (q, h)
        got = self._blocks.get(key)
        if got is None:
            got = []
            for j, (qj, hj) in enumerate(self.gens):
                if hj != h:
                    continue
                d = q - qj
                if d < 0 or d % 2:
                    continue
                for m in monomials(len(self.vars), d // 2):
                    got.append((j, m))
            self._blocks[key] = got
        return got

    def block_matrix(self, q: int, h: int, cols=None, bidegree=(2, 2)):
        """Sparse columns of a differential out of the (q, h) block."""
        dq, dh = bidegree
        src = self.block(q, h)
        tgt = self.block(q + dq, h + dh)
        idx = {bm: i for i, bm in enumerate(tgt)}
        data = cols if cols is not None else self.dcols
        out = []
        for (j, mono) in src:
            vec = {}
            for i, p in data.get(j, ()):
                for e, c in p.terms.items():
                    r = idx.get((i, tuple(a + b for a, b in zip(mono, e))))
                    if r is None:
                        continue
                    s = vec.get(r, QQ(0)) + c
                    if s == 0:
                        vec.pop(r, None)
                    else:
                        vec[r] = s
            out.append(vec)
        return src, tgt, out

    def homology_dims(self, qmax: int, hrange=None) -> DimTable:
        hmin, hmax = hrange if hrange else self.h_range()
        ents = {}
        rank_cache = {}

        def rank_at(q, h):
            key = (q, h)
            if key not in rank_cache:
                _s, _t, cols = self.block_matrix(q, h)
                rank_cache[key] = sparse_rank(cols)
            return rank_cache[key]

        for h in range(hmin, hmax + 1, 2):
            for q in range(self.min_q(), qmax + 1):
                b = len(self.block(q, h))
                if b == 0:
                    continue
                d = b - rank_at(q, h) - rank_at(q - 2, h - 2)
                if d:
                    ents[(q, h)] = d
        return DimTable(ents, qmax)


def tensor(A: GradedComplex, B: GradedComplex) -> GradedComplex:
    """Tensor over R with Koszul signs from the horizontal parity."""
    if A.vars != B.vars:
        raise ValueError("tensor factors over different rings")
    gens = []
    index = {}
    for ia, (qa, ha) in enumerate(A.gens):
        for ib, (qb, hb) in enumerate(B.gens):
            index[(ia, ib)] = len(gens)
            gens.append((qa + qb, ha + hb))
    dcols = {}
    for (ia, ib), j in index.items():
        col = []
        for i2, p in A.dcols.get(ia, ()):
            col.append((index[(i2, ib)], p))
        sign = -1 if (A.gens[ia][1] // 2) % 2 else 1
        for i2, p in B.dcols.get(ib, ()):
            col.append((index[(ia, i2)], p * sign))
        if col:
            dcols[j] = col
    return GradedComplex(A.vars, tuple(gens), dcols)


# standard factor shifts, ((q,h) of the source generator, (q,h) of the target)
STD2 = ((0, -2), (0, 0))         # bivalent linear factor
STD4L = ((1, -2), (1, 0))        # 4-valent linear factor
STD4Q = ((0, -2), (-2, 0))       # 4-valent quadratic factor
STDU = ((0, -2), (0, 0))         # edge-variable factor in cycle complexes


@dataclass(frozen=True)
class KoszulFactor:
    elem: MultiLaurent
    shifts: tuple = STD2


@dataclass(frozen=True)
class KoszulComplex:
    """Tensor of two-term complexes R{s1} --elem--> R{s0}."""

    vars: tuple
    factors: tuple
    shift: tuple = (0, 0)

    def tensor(self, other: "KoszulComplex") -> "KoszulComplex":
        if self.vars != other.vars:
            raise ValueError("tensor factors over different rings")
        return KoszulComplex(self.vars, self.factors + other.factors,
                             (self.shift[0] + other.shift[0],
                              self.shift[1] + other.shift[1]))

    def to_explicit(self) -> GradedComplex:
        m = len(self.factors)
        gens = []
        for bits in range(1 << m):
            q, h = self.shift
            for i in range(m):
                s1, s0 = self.factors[i].shifts
                q += s1[0] if (bits >> i) & 1 else s0[0]
                h += s1[1] if (bits >> i) & 1 else s0[1]
            gens.append((q, h))
        dcols = {}
        for bits in range(1 << m):
            col = []
            sign = 1
            for i in range(m):
                if (bits >> i) & 1:
                    p = self.factors[i].elem * sign
                    if not p.is_zero():
                        col.append((bits & ~(1 << i), p))
                    sign = -sign
            if col:
                dcols[bits] = col
        return GradedComplex(self.vars, tuple(gens), dcols)

    def homology_dims(self, qmax: int) -> DimTable:
        return _koszul_homology(self, qmax)


def koszul(factors, vars, shift=(0, 0)) -> KoszulComplex:
    """Build a Koszul complex from KoszulFactors or (element, shifts) pairs."""
    fs = []
    for f in factors:
        if not isinstance(f, KoszulFactor):
            f = KoszulFactor(*f)
        if not f.elem.is_zero() and not f.elem.is_homogeneous():
            raise ValueError("Koszul factors must be homogeneous")
        fs.append(f)
    return KoszulComplex(tuple(vars), tuple(fs), shift)


def _linear_elimination(vars, elem):
    """(index, substitution over the smaller table, smaller table).

    elem must be homogeneous linear and nonzero; the returned substitution
    expresses the eliminated variable on the zero set of elem.
    """
    e, c = sorted(elem.terms.items())[0]
    i = e.index(1)
    small = vars[:i] + vars[i + 1:]
    t = {}
    for ee, cc in elem.terms.items():
        if ee == e:
            continue
        if ee[i]:
            raise ValueError("not linear in the chosen variable")
        t[ee[:i] + ee[i + 1:]] = -cc / c
    return i, MultiLaurent(small, t), small


def _subst_var(p: MultiLaurent, i: int, value: MultiLaurent) -> MultiLaurent:
    """Substitute variable i by a polynomial over the table without it."""
    small = p.vars[:i] + p.vars[i + 1:]
    out = MultiLaurent.zero(small)
    powcache = {0: MultiLaurent.one(small)}

    def vpow(k):
        if k not in powcache:
            powcache[k] = vpow(k - 1) * value
        return powcache[k]

    for e, c in p.terms.items():
        mono = MultiLaurent.monomial(small, e[:i] + e[i + 1:], c)
        out = out + mono * vpow(e[i])
    return out


def _gl_zero_koszul(factors):
    """Zero out span-dependent entries among same-shape Koszul factors."""
    groups = {}
    out = list(factors)
    for idx, f in enumerate(out):
        if f.elem.is_zero():
            continue
        key = (f.shifts, f.elem.total_degree())
        r = groups.setdefault(key, RREF())
        piv, _aux = r.insert(dict(f.elem.terms))
        if piv is None:
            out[idx] = KoszulFactor(MultiLaurent.zero(f.elem.vars), f.shifts)
    return out


def _koszul_homology(kc: KoszulComplex, qmax: int) -> DimTable:
    vars = kc.vars
    factors = list(kc.factors)
    pending = []                  # 2-point towers from zero factors
    total = kc.shift

    while True:
        factors = _gl_zero_koszul(factors)
        keep = []
        for f in factors:
            if f.elem.is_zero():
                pending.append(f.shifts)
            else:
                keep.append(f)
        factors = keep
        lin = next((f for f in factors if f.elem.total_degree() == 1), None)
        if lin is None:
            break
        factors.remove(lin)
        i, sub, small = _linear_elimination(vars, lin.elem)
        factors = [KoszulFactor(_subst_var(f.elem, i, sub), f.shifts)
                   for f in factors]
        vars = small
        total = (total[0] + lin.shifts[1][0], total[1] + lin.shifts[1][1])

    budget = total[0] + sum(min(s1[0], s0[0]) for (s1, s0) in pending)
    core_qmax = qmax - budget
    k = len(vars)
    if not factors:
        core = free_table(k, (0, 0), core_qmax)
    elif len(factors) == 1:
        f = factors[0]
        core = hypersurface_table(k, f.elem.total_degree(), f.shifts[1],
                                  core_qmax)
    else:
        core = KoszulComplex(vars, tuple(factors)).to_explicit() \
            .homology_dims(core_qmax)
    for (s1, s0) in pending:
        pair = DimTable({s1: 1, s0: 1} if s1 != s0 else {s1: 2}, None)
        core = core.convolve(pair)
    return core.shift(*total)._trim()


# ---------------------------------------------------------------------------
# two-differential complexes

@dataclass(frozen=True)
class MFFactor:
    x: MultiLaurent               # d_+ entry
    y: MultiLaurent               # d_- back arrow
    shifts: tuple = STD2


@dataclass(frozen=True)
class MFTensor:
    """Tensor of two-term matrix factorizations (x_i, y_i)."""

    vars: tuple
    factors: tuple
    n: int
    shift: tuple = (0, 0)

    def potential(self) -> MultiLaurent:
        w = MultiLaurent.zero(self.vars)
        for f in self.factors:
            w = w + f.x * f.y
        return w

    def reduce(self) -> "MFTensor":
        """Exclude regular linear d_+ entries together with their arrows."""
        vars = self.vars
        factors = [[f.x, f.y, f.shifts] for f in self.factors]
        total = self.shift
        while True:
            groups = {}
            for idx, fac in enumerate(factors):
                x = fac[0]
                if x.is_zero():
                    continue
                key = (fac[2], x.total_degree())
                pivots = groups.setdefault(key, [])
                changed = True
                while changed and not x.is_zero():
                    changed = False
                    for pidx in pivots:
                        px = factors[pidx][0]
                        lam = _leading_ratio(x, px)
                        if lam is not None:
                            x = x - px * lam
                            factors[pidx][1] = factors[pidx][1] + fac[1] * lam
                            changed = True
                fac[0] = x
                if not x.is_zero():
                    pivots.append(idx)
            lin = next((i for i, fac in enumerate(factors)
                        if not fac[0].is_zero()
                        and fac[0].total_degree() == 1), None)
            if lin is None:
                break
            x, _y, sh = factors.pop(lin)
            i, sub, small = _linear_elimination(vars, x)
            factors = [[_subst_var(fx, i, sub), _subst_var(fy, i, sub), fsh]
                       for (fx, fy, fsh) in factors]
            vars = small
            total = (total[0] + sh[1][0], total[1] + sh[1][1])
        return MFTensor(vars,
                        tuple(MFFactor(x, y, sh) for (x, y, sh) in factors),
                        self.n, total)

    def to_two_diff(self) -> "TwoDifferentialComplex":
        m = len(self.factors)
        gens = []
        for bits in range(1 << m):
            q, h = 0, 0
            for i in range(m):
                s1, s0 = self.factors[i].shifts
                q += s1[0] if (bits >> i) & 1 else s0[0]
                h += s1[1] if (bits >> i) & 1 else s0[1]
            gens.append((q, h))
        dplus = {}
        dminus = {}
        for bits in range(1 << m):
            colp = []
            colm = []
            sign = 1
            for i in range(m):
                if (bits >> i) & 1:
                    p = self.factors[i].x * sign
                    if not p.is_zero():
                        colp.append((bits & ~(1 << i), p))
                    sign = -sign
                else:
                    p = self.factors[i].y * sign
                    if not p.is_zero():
                        colm.append((bits | (1 << i), p))
            if colp:
                dplus[bits] = colp
            if colm:
                dminus[bits] = colm
        plus = GradedComplex(self.vars, tuple(gens), dplus)
        return TwoDifferentialComplex(plus, dminus, self.n, self.shift)

    def two_step_homology(self, qmax: int) -> DimTable:
        red = self.reduce()
        return red.to_two_diff().two_step_homology(qmax)


def _leading_ratio(x: MultiLaurent, pivot: MultiLaurent):
    """lam such that x - lam*pivot kills pivot's leading term, or None."""
    pl = pivot._lead()
    c = x.terms.get(pl)
    if c is None:
        return None
    return c / pivot.terms[pl]


@dataclass(eq=False)
class TwoDifferentialComplex:
    """d_+ of bidegree {2,2} and d_- of bidegree {2n,-2} on one module."""

    plus: GradedComplex
    dminus: dict
    n: int
    shift: tuple = (0, 0)

    def verify(self):
        self.plus.degree_check((2, 2))
        minus = GradedComplex(self.plus.vars, self.plus.gens, self.dminus)
        minus.degree_check((2 * self.n, -2))
        if not self.plus.compose_is_zero():
            raise ValueError("d_+^2 != 0")
        if not minus.compose_is_zero():
            raise ValueError("d_-^2 != 0")
        zero = MultiLaurent.zero(self.plus.vars)
        for j in range(len(self.plus.gens)):
            acc = {}
            for i, p in self.plus.dcols.get(j, ()):
                for i2, p2 in self.dminus.get(i, ()):
                    acc[i2] = acc.get(i2, zero) + p2 * p
            for i, p in self.dminus.get(j, ()):
                for i2, p2 in self.plus.dcols.get(i, ()):
                    acc[i2] = acc.get(i2, zero) + p2 * p
            if any(not v.is_zero() for v in acc.values()):
                raise ValueError("d_+ d_- + d_- d_+ != 0")

    def two_step_homology(self, qmax: int) -> DimTable:
        return _two_step(self, qmax)


def _two_step(C: TwoDifferentialComplex, qmax: int) -> DimTable:
    """H(H(C, d_+), d_-^*) per bigrading, exactly.

    The d_+-homology at each bigrading is presented by explicit cycle
    representatives (kernel vectors of the outgoing block, echelonized
    against the incoming boundaries); the induced d_- matrices between
    these presentations make the two-step dimension local.
    """
    plus = C.plus
    n = C.n
    hmin, hmax = plus.h_range()
    qmin = plus.min_q()
    hdata = {}
    induced = {}

    def homology_at(q, h):
        key = (q, h)
        if key in hdata:
            return hdata[key]
        src = plus.block(q, h)
        if not src:
            hdata[key] = ([], RREF())
            return hdata[key]
        _s, _t, out_cols = plus.block_matrix(q, h)
        kernels = kernel_basis(out_cols)
        cls = RREF()
        if q - 2 >= qmin and h - 2 >= hmin:
            _s2, _t2, in_cols = plus.block_matrix(q - 2, h - 2)
            for vec in in_cols:
                if vec:
                    cls.insert(vec, {})
        reps = []
        for vec in kernels:
            piv, _aux = cls.insert(vec, {("rep", len(reps)): QQ(1)})
            if piv is not None:
                reps.append(vec)
        hdata[key] = (reps, cls)
        return hdata[key]

    def dminus_apply(q, h, vec):
        src = plus.block(q, h)
        tgt = plus.block(q + 2 * n, h - 2)
        idx = {bm: i for i, bm in enumerate(tgt)}
        out = {}
        for r, c in vec.items():
            j, mono = src[r]
            for i, p in C.dminus.get(j, ()):
                for e, cc in p.terms.items():
                    t = idx.get((i, tuple(a + b for a, b in zip(mono, e))))
                    if t is None:
                        continue
                    s = out.get(t, QQ(0)) + c * cc
                    if s == 0:
                        out.pop(t, None)
                    else:
                        out[t] = s
        return out

    def induced_matrix(q, h):
        """Columns of d_-^* from classes at (q, h) to classes one step on."""
        key = (q, h)
        if key in induced:
            return induced[key]
        reps, _cls = homology_at(q, h)
        _treps, tcls = homology_at(q + 2 * n, h - 2)
        cols = []
        for vec in reps:
            w = dminus_apply(q, h, vec)
            residue, aux = tcls.reduce(w, {})
            if residue:
                raise AssertionError("induced d_- image left the cycle space")
            col = {}
            for tag, v in (aux or {}).items():
                col[tag[1]] = -v
            cols.append(col)
        induced[key] = cols
        return cols

    ents = {}
    for h in range(hmin, hmax + 1, 2):
        for q in range(qmin, qmax + 1):
            reps, _c = homology_at(q, h)
            if not reps:
                continue
            rk_out = sparse_rank(induced_matrix(q, h))
            rk_in = sparse_rank(induced_matrix(q - 2 * n, h + 2)) \
                if h + 2 <= hmax and q - 2 * n >= qmin else 0
            d = len(reps) - rk_out - rk_in
            if d:
                ents[(q, h)] = d
    return DimTable(ents, qmax).shift(*C.shift)._trim()
