"""Composition-product identities and isomorphism checks.

Every check is an exact equality of canonical polynomials or of dimension
tables within the computed window, after at most one declared global shift
which is always reported, never silent.  The overall normalization of the
bigraded theories is only pinned up to shifts coming from the braid number,
so the table comparisons locate the unique candidate shift from the lowest
supported row and verify exact equality there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import diagram as dg
from . import krhfk, skein
from .homalg import (DimTable, equal_up_to_shift, poincare_polynomial,
                     support_certified, zero_table, _min_valid)
from .multipoly import MultiLaurent
from .skein import LaurentFraction, VARS_AQ, qdiff

VARS3 = ("a1", "a2", "q")
DEFAULT_QMAX = 16


@dataclass
class VerificationReport:
    name: str
    target: str
    passed: bool
    shift: tuple | None = None
    rows: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    def to_json_obj(self):
        return {
            "schema": 1,
            "check": self.name,
            "target": self.target,
            "passed": self.passed,
            "shift": list(self.shift) if isinstance(self.shift, tuple)
            else self.shift,
            "rows": [[list(k) if isinstance(k, (tuple, frozenset)) else k, v]
                     for k, v in self.rows],
            "detail": self.detail,
        }

    def text(self) -> str:
        lines = [f"[{'PASS' if self.passed else 'FAIL'}] {self.name} "
                 f"{self.target}"]
        if self.shift not in (None, (0, 0), 0):
            lines.append(f"  global shift: {self.shift}")
        for k, v in self.rows:
            lines.append(f"  {k} -> {v}")
        for k, v in self.detail.items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)


def _classes(D, lab):
    one = dg.subdiagram(D, lab.edges_one, "D_f1")
    two = dg.subdiagram(D, set(D.edges) - set(lab.edges_one), "D_f2")
    return one, two


def tables_equal(A: DimTable, B: DimTable) -> bool:
    bound = _min_valid(A.qmax_valid, B.qmax_valid)
    keys = set(A.entries) | set(B.entries)
    return all(A.entries.get(k, 0) == B.entries.get(k, 0)
               for k in keys if bound is None or k[0] <= bound)


# ---------------------------------------------------------------------------
# decategorified checks

def _prime_in(D_sub, aname: str) -> LaurentFraction:
    """P'_H of a class diagram, with a renamed to a1 or a2."""
    if not D_sub.edges:
        return LaurentFraction.one(VARS3)
    fr = skein.homfly(D_sub).prime()
    return LaurentFraction(fr.num.substitute(
        "a", MultiLaurent.var(VARS3, aname)), fr.den)


def jaeger_check(D: dg.SingularBraidDiagram) -> VerificationReport:
    """Two-variable composition product over admissible labelings."""
    if not D.is_classical():
        raise ValueError("Jaeger's identity applies to classical diagrams")
    lhs = LaurentFraction(MultiLaurent.zero(VARS3), 0)
    rows = []
    for f in dg.enumerate_labelings(D, admissible_only=True):
        D1, D2 = _classes(D, f)
        r1 = -len(dg.seifert_circles(D1)) if D1.edges else 0
        r2 = -len(dg.seifert_circles(D2)) if D2.edges else 0
        pref = MultiLaurent.monomial(
            VARS3, _exps3(a1=r2, a2=-r1),
            -1 if f.neg_turns % 2 else 1) * qdiff(VARS3) ** f.turns
        term = LaurentFraction(pref, 0) * _prime_in(D1, "a1") \
            * _prime_in(D2, "a2")
        rows.append((tuple(sorted(f.edges_one)), term.text()))
        lhs = lhs + term
    res = skein.homfly(D)
    a12 = (MultiLaurent.var(VARS3, "a1") * MultiLaurent.var(VARS3, "a2"))
    num = res.P_H.num.substitute("a", a12)
    unit = a12 - a12.monomial_inverse()
    rhs = LaurentFraction(num * unit * a12 ** res.writhe, res.P_H.den + 1)
    ok = lhs == rhs
    return VerificationReport("jaeger", _target(D), ok, shift=None, rows=rows,
                              detail={"lhs": lhs.text(), "rhs": rhs.text()})


def _exps3(a1=0, a2=0, q=0):
    return (a1, a2, q)


def destab_check(D: dg.SingularBraidDiagram) -> VerificationReport:
    """Marked-diagram composition product at a_1 = q."""
    if D.marked_edge is None:
        raise ValueError("destabilized check needs a marked edge")
    ref = D.edges[D.marked_edge]
    qv = MultiLaurent.var(VARS_AQ, "q")
    total = LaurentFraction(MultiLaurent.zero(VARS_AQ), 0)
    rows = []
    for f in dg.enumerate_labelings(D, require_marked_2=True,
                                    admissible_only=True):
        D1, D2 = _classes(D, f)
        r1 = dg.seifert_data(D1, relative_to=ref).rotation if D1.edges else 0
        r2 = dg.seifert_data(D2, relative_to=ref).rotation
        s1 = dg.adjacent_sign_sum(D, f.edges_one, 1)
        s2 = dg.adjacent_sign_sum(D, f.edges_one, 2)
        if D1.edges:
            p1h = skein.homfly(D1).P_H
            P1 = LaurentFraction(p1h.num.substitute("a", qv), p1h.den)
        else:
            P1 = LaurentFraction.one(VARS_AQ)
        P2 = skein.homfly(D2).P_H
        pref = MultiLaurent.monomial(VARS_AQ, (-r1 - s1, r2 - s2),
                                     -1 if f.neg_turns % 2 else 1) \
            * qdiff(VARS_AQ) ** f.turns
        term = LaurentFraction(pref, 0) * P1 * P2
        rows.append((tuple(sorted(f.edges_one)), term.text()))
        total = total + term
    res = skein.homfly(D)
    aq = MultiLaurent.var(VARS_AQ, "a") * qv
    rhs = LaurentFraction(res.P_H.num.substitute("a", aq), res.P_H.den)
    ok = total == rhs
    return VerificationReport("destab", _target(D), ok, rows=rows,
                              detail={"total": total.text(),
                                      "rhs": rhs.text()})


def _prime_poincare(D_sub, k: int, qmax: int) -> MultiLaurent:
    """P'_k of a fully singular diagram: gr_k Poincare polynomial."""
    tbl = krhfk.hpm_table(D_sub, k, qmax)
    if not support_certified(tbl):
        raise ValueError("window too small to certify finite support")
    return poincare_polynomial(tbl, k)


def singular_comp_check(S, m: int, n: int,
                        qmax: int = DEFAULT_QMAX) -> VerificationReport:
    """Composition product for fully singular braids, sl_m x sl_n."""
    if not S.is_fully_singular():
        raise ValueError("singular composition needs a fully singular braid")
    lhs = MultiLaurent.zero(("q",))
    rows = []
    for f in dg.enumerate_labelings(S):
        D1, D2 = _classes(S, f)
        r1 = dg.strand_rotation(D1)
        r2 = dg.strand_rotation(D2)
        sigma = f.T2 - f.T1 + m * r1 - n * r2
        term = (MultiLaurent.var(("q",), "q", sigma)
                * _prime_poincare(D1, n, qmax)
                * _prime_poincare(D2, m, qmax))
        rows.append((tuple(sorted(f.edges_one)), term.text()))
        lhs = lhs + term
    rhs = _prime_poincare(S, m + n, qmax)
    shift = _q_power_shift(lhs, rhs)
    ok = shift is not None and lhs == rhs * MultiLaurent.var(("q",), "q", shift)
    return VerificationReport("singular-comp", _target(S, m=m, n=n), ok,
                              shift=shift, rows=rows,
                              detail={"lhs": lhs.text(), "rhs": rhs.text()})


def _q_power_shift(lhs: MultiLaurent, rhs: MultiLaurent):
    if lhs.is_zero() and rhs.is_zero():
        return 0
    if lhs.is_zero() or rhs.is_zero():
        return None
    la = min(e[0] for e in lhs.terms)
    ra = min(e[0] for e in rhs.terms)
    return la - ra


# ---------------------------------------------------------------------------
# dimension-table checks

def wagner_bigraded_check(S, m: int, n: int,
                          qmax: int = DEFAULT_QMAX) -> VerificationReport:
    """Bigraded composition product: sl_{m+n} from sl_n x sl_m pieces."""
    if not S.is_fully_singular():
        raise ValueError("needs a fully singular braid")
    lhs = zero_table()
    rows = []
    for f in dg.enumerate_labelings(S):
        D1, D2 = _classes(S, f)
        t1 = krhfk.hpm_table(D1, n, qmax)
        t2 = krhfk.hpm_table(D2, m, qmax)
        dq = f.T2 - f.T1 - 2 * n * dg.strand_rotation(D2)
        piece = t1.convolve(t2).shift(dq, 0)
        if piece.entries:
            rows.append((tuple(sorted(f.edges_one)),
                         f"dim {piece.total_dim()} shifted ({dq}, 0)"))
        lhs = lhs.add(piece)
    rhs = krhfk.hpm_table(S, m + n, qmax)
    ok, shift, bound = equal_up_to_shift(lhs, rhs)
    return VerificationReport("wagner", _target(S, m=m, n=n),
                              ok and shift == (0, 0), shift=shift, rows=rows,
                              detail={"qbound": bound})


def _internal_qmax(S, qmax: int) -> int:
    """Deep enough window that the regraded comparison covers qmax."""
    hmin = (-2 * len(S.bivalent_vertices)
            - 4 * len(S.singular_vertices))
    return qmax - hmin


def thm21_check(S, qmax: int = DEFAULT_QMAX) -> VerificationReport:
    """Labeled sum of base-complex homologies against the regraded whole.

    The identity holds after one global shift {-2 r(S), 0}: the braid-number
    normalization the local grading conventions leave out.  The shift found
    is reported and required to match.
    """
    if not S.is_fully_singular():
        raise ValueError("needs a fully singular braid")
    qi = _internal_qmax(S, qmax)
    lhs = zero_table()
    rows = []
    for f in dg.enumerate_labelings(S):
        if not dg.is_multicycle_set(S, f.edges_one):
            continue
        D1, D2 = _classes(S, f)
        r1 = dg.strand_rotation(D1)
        r2 = dg.strand_rotation(D2)
        dq = f.T2 - f.T1 - 2 * r2
        piece = krhfk.hh_table(D2, qi).shift(dq, 2 * r1)
        rows.append((tuple(sorted(f.edges_one)), f"shift ({dq}, {2 * r1})"))
        lhs = lhs.add(piece)
    rhs = krhfk.hh_table(S, qi).regrade(1)
    ok, shift, bound = equal_up_to_shift(lhs, rhs)
    expected = (-2 * dg.strand_rotation(S), 0)
    return VerificationReport(
        "thm21", _target(S), ok and shift == expected, shift=shift, rows=rows,
        detail={"expected_shift": expected, "qbound": bound})


def filterediso_check(S, qmax: int = DEFAULT_QMAX) -> VerificationReport:
    """Both assemblies of the filtered homology against the regraded whole.

    Route (a) takes the homology of each cycle complex directly; route (b)
    shifts the base-complex homology of S - Z.  The routes must agree with
    no shift at all; the comparison with the regraded whole carries the
    global {-2 r(S), 0} braid-number shift.
    """
    if not S.is_fully_singular():
        raise ValueError("needs a fully singular braid")
    qi = _internal_qmax(S, qmax)
    route_a = zero_table()
    route_b = zero_table()
    rows = []
    for bundle in krhfk.build_CF_graded(S):
        ta = bundle.complex.homology_dims(qi).shift(*bundle.shift)
        rest = dg.subdiagram(S, set(S.edges) - set(bundle.cycle.edges))
        tb = krhfk.hh_table(rest, qi).shift(*bundle.shift)
        rows.append((tuple(sorted(bundle.cycle.edges)),
                     f"shift {bundle.shift}"))
        route_a = route_a.add(ta)
        route_b = route_b.add(tb)
    routes_ok = tables_equal(route_a, route_b)
    rhs = krhfk.hh_table(S, qi).regrade(1)
    ok, shift, bound = equal_up_to_shift(route_a, rhs)
    expected = (-2 * dg.strand_rotation(S), 0)
    return VerificationReport(
        "filterediso", _target(S),
        routes_ok and ok and shift == expected, shift=shift, rows=rows,
        detail={"routes_agree": routes_ok, "expected_shift": expected,
                "qbound": bound})


def cfn_total_check(S, n: int,
                    qmax: int = DEFAULT_QMAX) -> VerificationReport:
    """Deformed cycle complexes assemble to the next deformed homology."""
    if not S.is_fully_singular():
        raise ValueError("needs a fully singular braid")
    lhs = zero_table()
    rows = []
    for bundle in krhfk.build_CFn_graded(S, n):
        t = bundle.deformed.two_step_homology(qmax).shift(*bundle.shift)
        rows.append((tuple(sorted(bundle.cycle.edges)),
                     f"dim {t.total_dim()} shift {bundle.shift}"))
        lhs = lhs.add(t)
    rhs = krhfk.hpm_table(S, n + 1, qmax)
    column = 2 * dg.strand_rotation(S)
    single = (all(h == column for h in lhs.h_values())
              and all(h == column for h in rhs.h_values()))
    ok, shift, bound = equal_up_to_shift(lhs, rhs)
    return VerificationReport(
        "cfn-total", _target(S, n=n), ok and shift == (0, 0) and single,
        shift=shift, rows=rows,
        detail={"single_column": single, "column": column, "qbound": bound})


def sl1_check(S, qmax: int = DEFAULT_QMAX) -> VerificationReport:
    """Rank-one criterion for the n = 1 two-step homology.

    A disjoint union of circles through bivalent vertices has total
    dimension one, sitting at {0, 2 r(S)}; anything with a retained
    4-valent vertex has vanishing homology.
    """
    tbl = krhfk.hpm_table(S, 1, qmax)
    circle_union = all(v.kind == "b" for v in S.vertices)
    if circle_union:
        expected = {(0, 2 * dg.strand_rotation(S)): 1}
    else:
        expected = {}
    ok = tbl.entries == expected
    return VerificationReport("sl1", _target(S), ok,
                              detail={"dims": sorted(tbl.entries.items()),
                                      "expected": sorted(expected.items())})


def _target(D, **params) -> str:
    word = " ".join(("-" if k == "s-" else "") + k.rstrip("+-") + str(i)
                    for k, i in D.word) if D.word else f"<{len(D.edges)} edges>"
    extra = "".join(f" {k}={v}" for k, v in params.items())
    mark = f" mark={D.marked_edge}" if D.marked_edge is not None else ""
    return f"'{word}' strands={D.strands}{mark}{extra}"


# ---------------------------------------------------------------------------
# corpora and the suite

CLASSICAL_CORPUS = [
    ("", 1), ("", 2), ("s1", 2), ("-s1", 2), ("s1 s1", 2), ("s1 -s1", 2),
    ("s1 s1 s1", 2), ("-s1 -s1 -s1", 2), ("s1 s1 s1 s1", 2),
    ("s1 s1 s1 s1 s1", 2), ("s1 s1 s1 s1 s1 s1", 2),
    ("s1 s2", 3), ("s1 -s2", 3), ("-s1 s2", 3), ("s1 s2 s1", 3),
    ("s1 s2 -s1", 3), ("s1 -s2 s1 -s2", 3), ("s1 s2 s1 s2", 3),
    ("s1 s1 s2 s2", 3), ("s1 s2 s1 s2 s1 s2", 3), ("s1 s1 s1 s2", 3),
    ("-s1 -s2 -s1 -s2", 3), ("s1 s1 -s2 s1", 3),
]

MARKED_CORPUS = [
    ("", 1, 0), ("s1", 2, 0), ("s1 s1", 2, 0), ("s1 s1 s1", 2, 0),
    ("-s1 -s1 -s1", 2, 0), ("s1 s1 s1 s1", 2, 0), ("s1 s2", 3, 0),
    ("s1 -s2", 3, 0), ("s1 s1 s1 s2", 3, 0), ("s1 s2 s1", 3, 1),
]

SINGULAR_CORPUS = [
    ("b1", 1), ("b1 b1", 1), ("b1 b1 b1", 1), ("x1", 2), ("x1 b1", 2),
    ("x1 b2", 2), ("x1 b1 b2", 2), ("x1 x1", 2), ("x1 x2", 3),
    ("x1 x1 x1", 2),
]

SINGULAR_SMALL = [w for w in SINGULAR_CORPUS if w != ("x1 x1 x1", 2)]


def suite_jobs(qmax: int = DEFAULT_QMAX):
    """The acceptance battery as (description, callable) pairs."""
    jobs = []
    for word, strands in CLASSICAL_CORPUS:
        jobs.append((f"jaeger {word!r}/{strands}",
                     _bind(jaeger_check, dg.parse_diagram(word, strands))))
    for word, strands, mark in MARKED_CORPUS:
        jobs.append((f"destab {word!r}/{strands}",
                     _bind(destab_check,
                           dg.parse_diagram(word, strands, marked=mark))))
    for word, strands in SINGULAR_CORPUS:
        S = dg.parse_diagram(word, strands)
        jobs.append((f"sl1 {word!r}", _bind(sl1_check, S, qmax)))
        jobs.append((f"thm21 {word!r}", _bind(thm21_check, S, qmax)))
        jobs.append((f"filterediso {word!r}",
                     _bind(filterediso_check, S, qmax)))
        jobs.append((f"cfn {word!r} n=1", _bind(cfn_total_check, S, 1, qmax)))
    for word, strands in SINGULAR_SMALL:
        S = dg.parse_diagram(word, strands)
        jobs.append((f"wagner {word!r} 1+1",
                     _bind(wagner_bigraded_check, S, 1, 1, qmax)))
        jobs.append((f"singular-comp {word!r} 1+1",
                     _bind(singular_comp_check, S, 1, 1, qmax)))
    return jobs


def _bind(fn, *args):
    def run():
        return fn(*args)
    return run


def run_suite(qmax: int = DEFAULT_QMAX, jobs: int = 1):
    reports = []
    tasks = suite_jobs(qmax)
    if jobs > 1:
        import concurrent.futures as cf
        with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = [pool.submit(_run_named, name, qmax) for name, _ in tasks]
            reports = [f.result() for f in futs]
    else:
        for _name, fn in tasks:
            reports.append(fn())
    return reports


def _run_named(name: str, qmax: int):
    for nm, fn in suite_jobs(qmax):
        if nm == name:
            return fn()
    raise KeyError(name)
