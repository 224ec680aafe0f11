"""Exact sparse multivariate Laurent polynomials over the rationals.

One class serves two roles: the skein engine works in Laurent variables
(a, a1, a2, q), and the homological engine works in the polynomial subring
Q[U_0, ..., U_{k-1}] where multiplication by any U_i raises the quantum
grading by 2.  Every coefficient is an exact rational; there is no floating
point anywhere in this package.

Terms are stored as a dict from integer exponent vectors to rational
coefficients, with zero coefficients never stored, so equality is
structural.  The term order used for display and for exact division is
graded lexicographic.
"""

from __future__ import annotations

from typing import Iterable, Mapping

try:
    from gmpy2 import mpq as _ratio
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _ratio


def QQ(num, den=1):
    """Exact rational constructor (gmpy2.mpq, falling back to Fraction)."""
    return _ratio(num, den)


class ArityError(ValueError):
    """Raised when two polynomials over different variable tables are mixed."""


class InexactDivision(ArithmeticError):
    """Raised by exact_divide when the divisor does not divide exactly."""


class MultiLaurent:
    """Sparse Laurent polynomial over a fixed, ordered variable table."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Iterable[str], terms: Mapping | Iterable | None = None):
        self.vars = tuple(vars)
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for exps, coeff in items:
                coeff = QQ(coeff)
                if coeff == 0:
                    continue
                exps = tuple(int(e) for e in exps)
                if len(exps) != len(self.vars):
                    raise ArityError(f"exponent vector {exps} does not match {self.vars}")
                clean[exps] = clean.get(exps, QQ(0)) + coeff
                if clean[exps] == 0:
                    del clean[exps]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(vars) -> "MultiLaurent":
        return MultiLaurent(vars)

    @staticmethod
    def const(vars, c) -> "MultiLaurent":
        v = tuple(vars)
        return MultiLaurent(v, {(0,) * len(v): c})

    @staticmethod
    def one(vars) -> "MultiLaurent":
        return MultiLaurent.const(vars, 1)

    @staticmethod
    def var(vars, name: str, power: int = 1, coeff=1) -> "MultiLaurent":
        v = tuple(vars)
        e = [0] * len(v)
        e[v.index(name)] = power
        return MultiLaurent(v, {tuple(e): coeff})

    @staticmethod
    def monomial(vars, exps, coeff=1) -> "MultiLaurent":
        return MultiLaurent(vars, {tuple(exps): coeff})

    # -- ring structure ----------------------------------------------------

    def _check(self, other: "MultiLaurent"):
        if self.vars != other.vars:
            raise ArityError(f"variable tables differ: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if not isinstance(other, MultiLaurent):
            other = MultiLaurent.const(self.vars, other)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, QQ(0)) + c
            if s == 0:
                t.pop(e, None)
            else:
                t[e] = s
        out = MultiLaurent.__new__(MultiLaurent)
        out.vars, out.terms = self.vars, t
        return out

    def __neg__(self):
        out = MultiLaurent.__new__(MultiLaurent)
        out.vars = self.vars
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if not isinstance(other, MultiLaurent):
            other = MultiLaurent.const(self.vars, other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, MultiLaurent):
            c = QQ(other)
            if c == 0:
                return MultiLaurent.zero(self.vars)
            out = MultiLaurent.__new__(MultiLaurent)
            out.vars = self.vars
            out.terms = {e: k * c for e, k in self.terms.items()}
            return out
        self._check(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e, QQ(0)) + c1 * c2
                if s == 0:
                    t.pop(e, None)
                else:
                    t[e] = s
        out = MultiLaurent.__new__(MultiLaurent)
        out.vars, out.terms = self.vars, t
        return out

    __rmul__ = __mul__
    __radd__ = __add__

    def __rsub__(self, other):
        return (-self) + other

    def __pow__(self, n: int):
        if n < 0:
            inv = self.monomial_inverse()
            return inv ** (-n)
        out = MultiLaurent.one(self.vars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, MultiLaurent):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int,)):
            return self == MultiLaurent.const(self.vars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_polynomial(self) -> bool:
        """True when no variable occurs with a negative exponent."""
        return all(all(x >= 0 for x in e) for e in self.terms)

    def total_degree(self):
        """Max total degree of a term, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def quantum_degree(self):
        """2x total degree of a homogeneous polynomial (U_i weighs 2)."""
        if not self.is_homogeneous():
            raise ValueError("quantum degree of an inhomogeneous polynomial")
        d = self.total_degree()
        return None if d is None else 2 * d

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def monomial_inverse(self) -> "MultiLaurent":
        if len(self.terms) != 1:
            raise ValueError("only a single-term polynomial is invertible")
        ((e, c),) = self.terms.items()
        return MultiLaurent(self.vars, {tuple(-x for x in e): QQ(1) / c})

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), QQ(0))

    def degree_in(self, name: str):
        """(min, max) exponent of one variable, or None for zero."""
        if not self.terms:
            return None
        i = self.vars.index(name)
        es = [e[i] for e in self.terms]
        return min(es), max(es)

    # -- variable table surgery --------------------------------------------

    def embed(self, new_vars) -> "MultiLaurent":
        """Reinterpret over a larger table; maps variables by name."""
        new_vars = tuple(new_vars)
        pos = [new_vars.index(v) for v in self.vars]
        t = {}
        for e, c in self.terms.items():
            ne = [0] * len(new_vars)
            for p, x in zip(pos, e):
                ne[p] = x
            t[tuple(ne)] = c
        return MultiLaurent(new_vars, t)

    def project(self, new_vars) -> "MultiLaurent":
        """Drop variables not in new_vars; they must not occur."""
        new_vars = tuple(new_vars)
        drop = [i for i, v in enumerate(self.vars) if v not in new_vars]
        for e in self.terms:
            if any(e[i] for i in drop):
                raise ValueError("cannot drop a variable that occurs")
        return self.embed_onto(new_vars)

    def embed_onto(self, new_vars):
        new_vars = tuple(new_vars)
        idx = {v: i for i, v in enumerate(new_vars)}
        t = {}
        for e, c in self.terms.items():
            ne = [0] * len(new_vars)
            for v, x in zip(self.vars, e):
                if x:
                    ne[idx[v]] = x
            key = tuple(ne)
            t[key] = t.get(key, QQ(0)) + c
        return MultiLaurent(new_vars, t)

    def substitute(self, name: str, value: "MultiLaurent") -> "MultiLaurent":
        """Substitute one variable by a polynomial over value.vars.

        Remaining variables are matched by name into value's table.  When the
        substituted variable occurs with negative exponents, value must be an
        invertible monomial.
        """
        i = self.vars.index(name)
        tgt = value.vars
        for v in self.vars:
            if v != name and v not in tgt:
                raise ArityError(f"target table {tgt} is missing {v}")
        neg = any(e[i] < 0 for e in self.terms)
        inv = value.monomial_inverse() if neg else None
        out = MultiLaurent.zero(tgt)
        pows: dict[int, MultiLaurent] = {0: MultiLaurent.one(tgt)}

        def vpow(k: int) -> MultiLaurent:
            if k not in pows:
                pows[k] = (value if k > 0 else inv) ** abs(k)
            return pows[k]

        for e, c in self.terms.items():
            rest = {v: x for v, x in zip(self.vars, e) if v != name and x}
            mono = MultiLaurent.monomial(
                tgt, tuple(rest.get(v, 0) for v in tgt), c)
            out = out + mono * vpow(e[i])
        return out

    # -- division ----------------------------------------------------------

    def _lead(self):
        """Leading term under graded lex (largest total degree, then lex)."""
        return max(self.terms, key=lambda e: (sum(e), e))

    def exact_divide(self, den: "MultiLaurent") -> "MultiLaurent":
        """Exact quotient in the polynomial ring; raises InexactDivision.

        Correct for exact inputs: when self == q * den the leading terms
        cancel step by step under graded lex, so no false negatives occur.
        """
        self._check(den)
        if den.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if not (self.is_polynomial() and den.is_polynomial()):
            raise ValueError("exact_divide expects polynomial inputs")
        quot = MultiLaurent.zero(self.vars)
        rem = self
        dl = den._lead()
        dc = den.terms[dl]
        while rem.terms:
            rl = rem._lead()
            qe = tuple(a - b for a, b in zip(rl, dl))
            if any(x < 0 for x in qe):
                raise InexactDivision(f"{den} does not divide {self}")
            t = MultiLaurent.monomial(self.vars, qe, rem.terms[rl] / dc)
            quot = quot + t
            rem = rem - t * den
        return quot

    def exact_divide_laurent(self, den: "MultiLaurent") -> "MultiLaurent":
        """Exact division allowing Laurent inputs (shift, divide, unshift)."""
        self._check(den)
        if self.is_zero():
            return self
        n = len(self.vars)
        smin = [min(e[i] for e in self.terms) for i in range(n)]
        dmin = [min(e[i] for e in den.terms) for i in range(n)]
        sshift = tuple(-min(0, x) for x in smin)
        dshift = tuple(-min(0, x) for x in dmin)
        num = self * MultiLaurent.monomial(self.vars, sshift)
        d = den * MultiLaurent.monomial(self.vars, dshift)
        q = num.exact_divide(d)
        back = tuple(b - a for a, b in zip(sshift, dshift))
        return q * MultiLaurent.monomial(self.vars, back)

    # -- text ---------------------------------------------------------------

    def text(self) -> str:
        """Canonical text form: graded-lex sorted terms, explicit signs."""
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda e: (sum(e), e), reverse=True)
        parts = []
        for j, e in enumerate(keys):
            c = self.terms[e]
            sign = "-" if c < 0 else "+"
            c = abs(c)
            factors = []
            for v, x in zip(self.vars, e):
                if x == 0:
                    continue
                factors.append(v if x == 1 else f"{v}^{x}")
            if not factors or c != 1:
                factors.insert(0, str(c))
            body = " ".join(factors)
            if j == 0:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    __str__ = text

    def __repr__(self):
        return f"MultiLaurent({self.vars}, {self.text()})"


def parse_poly(text: str, vars) -> MultiLaurent:
    """Parse the canonical text form (sums of rational monomials)."""
    vars = tuple(vars)
    text = text.strip()
    if text in ("0", ""):
        return MultiLaurent.zero(vars)
    out = MultiLaurent.zero(vars)
    # negative exponents must survive the sign split
    guarded = text.replace("^-", "^~")
    terms: list[list[str]] = []
    for chunk in guarded.replace("-", " § -").replace("+", " § ").split("§"):
        chunk = chunk.strip()
        if chunk:
            terms.append(chunk.split())
    for factors in terms:
        coeff = QQ(1)
        exps = [0] * len(vars)
        for f in factors:
            if f.startswith("-"):
                coeff = -coeff
                f = f[1:]
            if not f:
                continue
            if f[0].isdigit():
                if "/" in f:
                    a, b = f.split("/")
                    coeff *= QQ(int(a), int(b))
                else:
                    coeff *= int(f)
            else:
                name, _, p = f.partition("^")
                p = p.replace("~", "-")
                exps[vars.index(name)] += int(p) if p else 1
        out = out + MultiLaurent.monomial(vars, tuple(exps), coeff)
    return out
