"""HOMFLY-PT polynomials of braid closures via the Hecke algebra.

The skein normalization is

    a P(L+) - a^{-1} P(L-) = (q - q^{-1}) P(L0),      P(unknot) = 1,

realized by rewriting the braid word in the standard basis of the Hecke
algebra (T_i^2 = (q - q^{-1}) T_i + 1) and evaluating the Markov trace with
tr(x T_{n-1} y) = z tr(x y).  For a word with exponent sum e on n strands,

    P = a^{-e} * sum_k c_k(q) a^k ((a - a^{-1})/(q - q^{-1}))^{n-1-k}

where tr = sum_k c_k z^k.  Multi-component closures genuinely carry powers
of (q - q^{-1}) in the denominator, so results are fractions num/(q-q^{-1})^m
compared by cross multiplication; division is performed exactly only when
needed for display or specialization.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import SingularBraidDiagram, as_braid_word, parse_word
from .multipoly import MultiLaurent, QQ

VARS_AQ = ("a", "q")


def qdiff(vars=("q",)) -> MultiLaurent:
    """q - q^{-1} over the given table."""
    return (MultiLaurent.var(vars, "q")
            - MultiLaurent.var(vars, "q", -1))


@dataclass(frozen=True)
class LaurentFraction:
    """num / (q - q^{-1})^den with exact Laurent numerator."""

    num: MultiLaurent
    den: int = 0

    @staticmethod
    def from_poly(p: MultiLaurent) -> "LaurentFraction":
        return LaurentFraction(p, 0)

    @staticmethod
    def one(vars) -> "LaurentFraction":
        return LaurentFraction(MultiLaurent.one(vars), 0)

    def __mul__(self, other):
        if isinstance(other, LaurentFraction):
            return LaurentFraction(self.num * other.num, self.den + other.den)
        return LaurentFraction(self.num * other, self.den)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, LaurentFraction):
            other = LaurentFraction(MultiLaurent.const(self.num.vars, other))
        m = max(self.den, other.den)
        qd = qdiff(self.num.vars)
        a = self.num * qd ** (m - self.den)
        b = other.num * qd ** (m - other.den)
        return LaurentFraction(a + b, m)

    def __sub__(self, other):
        if not isinstance(other, LaurentFraction):
            other = LaurentFraction(MultiLaurent.const(self.num.vars, other))
        return self + LaurentFraction(-other.num, other.den)

    def __neg__(self):
        return LaurentFraction(-self.num, self.den)

    def __eq__(self, other):
        if not isinstance(other, LaurentFraction):
            if isinstance(other, MultiLaurent):
                other = LaurentFraction(other, 0)
            else:
                return NotImplemented
        qd = qdiff(self.num.vars)
        return (self.num * qd ** other.den) == (other.num * qd ** self.den)

    def __hash__(self):
        return hash(self.reduced())

    def substitute(self, name: str, value: MultiLaurent) -> "LaurentFraction":
        return LaurentFraction(self.num.substitute(name, value), self.den)

    def reduced(self) -> "LaurentFraction":
        """Cancel as many (q - q^{-1}) factors as divide exactly."""
        num, den = self.num, self.den
        qd = qdiff(num.vars)
        while den > 0:
            try:
                num = num.exact_divide_laurent(qd)
            except Exception:
                break
            den -= 1
        return LaurentFraction(num, den)

    def as_poly(self) -> MultiLaurent:
        r = self.reduced()
        if r.den:
            raise ArithmeticError("value is not a Laurent polynomial")
        return r.num

    def text(self) -> str:
        r = self.reduced()
        if r.den == 0:
            return r.num.text()
        tail = "(q - q^-1)" if r.den == 1 else f"(q - q^-1)^{r.den}"
        return f"({r.num.text()}) / {tail}"

    __str__ = text


# ---------------------------------------------------------------------------
# Hecke algebra with Ocneanu trace

def _swap(w: tuple, i: int) -> tuple:
    return w[:i] + (w[i + 1], w[i]) + w[i + 2:]


def _add(elem: dict, w: tuple, c: MultiLaurent):
    s = elem.get(w)
    s = c if s is None else s + c
    if s.is_zero():
        elem.pop(w, None)
    else:
        elem[w] = s


def _right_mult(elem: dict, i: int, inverse: bool) -> dict:
    """Multiply an element of H_n on the right by T_i or T_i^{-1}."""
    qm = qdiff(("q",))
    out: dict = {}
    for w, c in elem.items():
        if w[i] < w[i + 1]:
            _add(out, _swap(w, i), c)
            if inverse:
                _add(out, w, -(qm * c))
        else:
            if inverse:
                _add(out, _swap(w, i), c)
            else:
                _add(out, w, qm * c)
                _add(out, _swap(w, i), c)
    return out


_TRACE_CACHE: dict = {}


def _trace_basis(w: tuple) -> MultiLaurent:
    """Ocneanu trace of a basis element T_w, as a polynomial in (q, z)."""
    got = _TRACE_CACHE.get(w)
    if got is not None:
        return got
    n = len(w)
    if n <= 1:
        out = MultiLaurent.one(("q", "z"))
    elif w[n - 1] == n - 1:
        out = _trace_basis(w[:n - 1])
    else:
        p = w.index(n - 1)
        u = w[:p] + w[p + 1:]          # in S_{n-1}
        elem = {u: MultiLaurent.one(("q",))}
        for j in range(n - 3, p - 1, -1):
            elem = _right_mult(elem, j, False)
        acc = MultiLaurent.zero(("q", "z"))
        for w2, c in elem.items():
            acc = acc + c.embed(("q", "z")) * _trace_basis(w2)
        out = acc * MultiLaurent.var(("q", "z"), "z")
    _TRACE_CACHE[w] = out
    return out


def hecke_trace(tokens, strands: int) -> MultiLaurent:
    """Trace of the braid word image, in variables (q, z)."""
    elem = {tuple(range(strands)): MultiLaurent.one(("q",))}
    for kind, i in tokens:
        elem = _right_mult(elem, i - 1, kind == "s-")
    out = MultiLaurent.zero(("q", "z"))
    for w, c in elem.items():
        out = out + c.embed(("q", "z")) * _trace_basis(w)
    return out


_HOMFLY_CACHE: dict = {}


def homfly_of_word(word: str, strands: int) -> LaurentFraction:
    """P_H of the closure of a classical braid word."""
    key = (word, strands)
    got = _HOMFLY_CACHE.get(key)
    if got is not None:
        return got
    tokens = [t for t in parse_word(word) if t[0] in ("s+", "s-")]
    e = sum(1 if k == "s+" else -1 for k, _i in tokens)
    tr = hecke_trace(tokens, strands)
    n = strands
    qd = qdiff(VARS_AQ)
    adiff = MultiLaurent.var(VARS_AQ, "a") - MultiLaurent.var(VARS_AQ, "a", -1)
    num = MultiLaurent.zero(VARS_AQ)
    for exps, c in tr.terms.items():
        kq, kz = exps
        mono = MultiLaurent.monomial(VARS_AQ, (kz - e, kq), c)
        num = num + mono * adiff ** (n - 1 - kz) * qd ** kz
    out = LaurentFraction(num, n - 1)
    _HOMFLY_CACHE[key] = out
    return out


@dataclass(frozen=True)
class HomflyResult:
    P_H: LaurentFraction
    writhe: int

    def prime(self) -> LaurentFraction:
        """P'_H = ((a - a^{-1})/(q - q^{-1})) a^w P_H."""
        adiff = (MultiLaurent.var(VARS_AQ, "a")
                 - MultiLaurent.var(VARS_AQ, "a", -1))
        apow = MultiLaurent.var(VARS_AQ, "a", self.writhe)
        return LaurentFraction(self.P_H.num * adiff * apow, self.P_H.den + 1)


def homfly(D: SingularBraidDiagram) -> HomflyResult:
    """HOMFLY-PT of a classical diagram; bivalent vertices are ignored."""
    if D.singular_vertices:
        raise ValueError("diagram has singular vertices")
    if not D.edges:
        raise ValueError("empty diagram has no normalized HOMFLY-PT value")
    if D.word:
        word = " ".join(("s" if k == "s+" else "-s") + str(i)
                        for k, i in D.word if k in ("s+", "s-"))
        strands = D.strands
    else:
        word, strands = as_braid_word(D)
    return HomflyResult(homfly_of_word(word, strands), D.writhe())


def homfly_prime(D: SingularBraidDiagram) -> LaurentFraction:
    """P'_H, with the empty diagram normalized to 1."""
    if not D.edges:
        return LaurentFraction.one(VARS_AQ)
    return homfly(D).prime()


def sl_n_specialize(res: HomflyResult, n: int, primed: bool = False
                    ) -> MultiLaurent:
    """Substitute a -> q^n; n = 0 gives the Alexander specialization."""
    frac = res.prime() if primed else res.P_H
    qn = MultiLaurent.var(("q",), "q", n) if n else MultiLaurent.one(("q",))
    num = frac.num.substitute("a", qn)
    out = LaurentFraction(num, frac.den)
    return out.as_poly()
