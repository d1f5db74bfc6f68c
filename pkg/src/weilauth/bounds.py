"""Entropy of the encoding key given observed messages, and the lower
bounds the deception probabilities are measured against.

Counts stay exact integers up to the final log2; entropies are plain
floats compared with a 1e-9 slack.  The combinatorial bound is exact:
P_I >= |S|/|M| and P_S >= (|S|-1)/(|M|-1).  The information-theoretic
bound P_I >= 2^(H(E|M) - H(E)) and P_S >= 2^(H(E|M^2) - H(E|M)) is
evaluated from enumerated message distributions: the posterior on keys
given consistent observations is uniform, so each conditional entropy
is sum_m P(m) log2 N(m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .caps import (DEFAULT_PAIR_CAP, DEFAULT_PS_CAP, DEFAULT_SCAN_CAP,
                   CapExceeded, check_cap, run_chunks)
from .authcode import (CodeParams, case_id, count_table, lambda_of, pi_closed,
                       pi_exact, ps_bound, ps_exact_details)
from .field import make_field


def combinatorial_bound(size_s: int, size_m: int) -> tuple[Fraction, Fraction]:
    """(R, P) = (|S|/|M|, (|S|-1)/(|M|-1)) as exact fractions."""
    if size_s < 2 or size_m < size_s:
        raise ValueError(f"degenerate sizes |S|={size_s}, |M|={size_m}")
    return Fraction(size_s, size_m), Fraction(size_s - 1, size_m - 1)


@dataclass(frozen=True)
class MessageDistribution:
    """Counts N(m1, m2) over all p^(n+1) messages under uniform (s, k).

    counts is indexed by m1 * p + m2 and sums to total = p^(2n).
    """

    p: int
    n: int
    counts: np.ndarray
    total: int

    def count(self, m1: int, m2: int) -> int:
        return int(self.counts[m1 * self.p + m2])

    def probability(self, m1: int, m2: int) -> Fraction:
        return Fraction(self.count(m1, m2), self.total)

    def value_multiplicities(self) -> dict[int, int]:
        """How many messages share each count value."""
        vals, mult = np.unique(self.counts, return_counts=True)
        return {int(v): int(m) for v, m in zip(vals, mult)}


def message_distribution(params: CodeParams, cap: int | None = DEFAULT_SCAN_CAP,
                         jobs: int = 1) -> MessageDistribution:
    """Tally messages over all (s, k) pairs.

    Must agree, message by message, with the key-count table; the test
    suite asserts that equivalence.
    """
    ctx = params.ctx
    check_cap(ctx.q, cap, "(s, k) message tally")
    p, q = ctx.p, ctx.q
    frk = ctx.digits[ctx.frob_perm(params.r)]
    tm = ctx.bilinear_trace_table()

    def chunk(lo, hi):
        m1 = ((ctx.digits[lo:hi, None, :] + frk[None, :, :]) % p) @ ctx._ppowers
        key = m1 * p + tm[lo:hi]
        return np.bincount(key.ravel(), minlength=q * p).astype(np.int64)

    counts = sum(run_chunks(chunk, q, jobs))
    return MessageDistribution(p, ctx.n, counts, q * q)


def conditional_entropy(dist: MessageDistribution) -> float:
    """H of the key given one observed message, in bits.

    Uses the uniform posterior over the N(m) consistent keys; messages
    with N(m) = 0 contribute nothing.
    """
    counts = dist.counts[dist.counts > 0].astype(np.float64)
    return float(np.sum(counts / dist.total * np.log2(counts)))


def h_e(params: CodeParams) -> float:
    """Key entropy in bits: log2 p^n."""
    return params.n * math.log2(params.p)


def h_e_given_m(params: CodeParams, cap: int | None = DEFAULT_SCAN_CAP,
                jobs: int = 1, dist: MessageDistribution | None = None) -> float:
    if dist is None:
        dist = message_distribution(params, cap=cap, jobs=jobs)
    return conditional_entropy(dist)


def h_e_given_mm(params: CodeParams, cap: int | None = DEFAULT_PAIR_CAP,
                 jobs: int = 1) -> float:
    """Key entropy given two observed messages with distinct sources.

    Enumerates ordered triples (s1, s2 != s1, k), tallies the message
    pairs, and applies the uniform-posterior entropy formula; the tally
    of a pair equals the number of keys consistent with both messages.
    """
    ctx = params.ctx
    check_cap(ctx.q, cap, "message-pair tally")
    p, q = ctx.p, ctx.q
    frk = ctx.digits[ctx.frob_perm(params.r)]
    tm = ctx.bilinear_trace_table()
    m = q * p
    offdiag = ~np.eye(q, dtype=bool)

    def chunk(lo, hi):
        acc = np.zeros(m * m, dtype=np.int64)
        for k in range(lo, hi):
            m1 = ((ctx.digits + frk[k][None, :]) % p) @ ctx._ppowers
            msg = m1 * p + tm[:, k].astype(np.int64)
            keys = msg[:, None] * m + msg[None, :]
            acc += np.bincount(keys[offdiag], minlength=m * m)
        return acc

    pair_counts = sum(run_chunks(chunk, q, jobs))
    total = q * q * (q - 1)
    nz = pair_counts[pair_counts > 0].astype(np.float64)
    return float(np.sum(nz / total * np.log2(nz)))


# ----------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class EntropyReport:
    p: int
    n: int
    r: int
    h_e: float
    h_e_given_m: float | None
    h_e_given_mm: float | None
    q_i: float | None                 # 2^(H(E|M) - H(E))
    q_s: float | None                 # 2^(H(E|M^2) - H(E|M))
    pi_value: Fraction | None         # exact scan
    pi_closed: Fraction
    ps_value: Fraction | None
    ps_bound: float | None
    r_bound: Fraction                 # |S|/|M|
    p_bound: Fraction                 # (|S|-1)/(|M|-1)
    ratio_q_pi: float | None
    ratio_r_pi: float
    ratio_p_ps: float | None


def entropy_report(params: CodeParams, scan_cap: int | None = DEFAULT_SCAN_CAP,
                   ps_cap: int | None = DEFAULT_PS_CAP,
                   pair_cap: int | None = DEFAULT_PAIR_CAP,
                   jobs: int = 1) -> EntropyReport:
    """Assemble every quantity computable within the given caps."""
    p, n, q = params.p, params.n, params.q
    he = h_e(params)
    rb, pb = combinatorial_bound(q, q * p)
    pic = pi_closed(params)

    hm = qi = pie = None
    try:
        dist = message_distribution(params, cap=scan_cap)
        hm = conditional_entropy(dist)
        qi = 2.0 ** (hm - he)
        pie = pi_exact(params, cap=scan_cap, jobs=jobs)
    except CapExceeded:
        pass

    hmm = qs = None
    if hm is not None:
        try:
            hmm = h_e_given_mm(params, cap=pair_cap, jobs=jobs)
            qs = 2.0 ** (hmm - hm)
        except CapExceeded:
            pass

    psv = None
    try:
        psv = ps_exact_details(params, cap=ps_cap, jobs=jobs).value
    except CapExceeded:
        pass
    psb = ps_bound(params)

    return EntropyReport(
        p=p, n=n, r=params.r,
        h_e=he, h_e_given_m=hm, h_e_given_mm=hmm, q_i=qi, q_s=qs,
        pi_value=pie, pi_closed=pic,
        ps_value=psv, ps_bound=psb.value if psb.applicable else None,
        r_bound=rb, p_bound=pb,
        ratio_q_pi=(qi / float(pie)) if (qi is not None and pie) else None,
        ratio_r_pi=float(rb / pic),
        ratio_p_ps=(float(pb) / float(psv)) if psv else None,
    )


REPORT_COLUMNS = [
    "p", "n", "r", "v", "case_id",
    "pi_num", "pi_den", "pi_closed_num", "pi_closed_den",
    "ps_exact_num", "ps_exact_den", "ps_bound",
    "R_num", "R_den", "P_num", "P_den",
    "h_e", "h_e_given_m", "q_i", "ratio_R_pi", "ratio_q_pi",
]


def optimality_report(p: int, r: int, n_range, scan_cap: int | None = DEFAULT_SCAN_CAP,
                      ps_cap: int | None = DEFAULT_PS_CAP,
                      pair_cap: int | None = DEFAULT_PAIR_CAP,
                      jobs: int = 1) -> list[dict]:
    """One row per extension degree, with capped cells left as None."""
    ns = list(n_range)
    if not ns:
        raise ValueError("empty degree range")
    rows = []
    for n in ns:
        params = CodeParams(make_field(p, n), r)
        rep = entropy_report(params, scan_cap=scan_cap, ps_cap=ps_cap,
                             pair_cap=pair_cap, jobs=jobs)
        rows.append({
            "p": p, "n": n, "r": r, "v": params.v, "case_id": case_id(params),
            "pi_num": rep.pi_value.numerator if rep.pi_value is not None else None,
            "pi_den": rep.pi_value.denominator if rep.pi_value is not None else None,
            "pi_closed_num": rep.pi_closed.numerator,
            "pi_closed_den": rep.pi_closed.denominator,
            "ps_exact_num": rep.ps_value.numerator if rep.ps_value is not None else None,
            "ps_exact_den": rep.ps_value.denominator if rep.ps_value is not None else None,
            "ps_bound": rep.ps_bound,
            "R_num": rep.r_bound.numerator, "R_den": rep.r_bound.denominator,
            "P_num": rep.p_bound.numerator, "P_den": rep.p_bound.denominator,
            "h_e": rep.h_e, "h_e_given_m": rep.h_e_given_m, "q_i": rep.q_i,
            "ratio_R_pi": rep.ratio_r_pi, "ratio_q_pi": rep.ratio_q_pi,
        })
    return rows


def distribution_census(params: CodeParams, cap: int | None = DEFAULT_SCAN_CAP):
    """Classify messages into the structural rows of the count formulas.

    Returns a dict label -> (message count, set of N values), where the
    labels split on m1 = 0, on whether m2 equals the tag offset of m1,
    and (in the doubly even case) on solvability.  The test suite holds
    these against the closed-form cardinalities.
    """
    dist = message_distribution(params, cap=cap)
    p = params.p
    rows: dict[str, list] = {}

    def put(label, value):
        cnt, vals = rows.setdefault(label, [0, set()])
        rows[label][0] = cnt + 1
        vals.add(value)

    for m1 in range(params.q):
        lam = lambda_of(params, m1) if m1 != 0 else 0
        for m2 in range(p):
            value = dist.count(m1, m2)
            if m1 == 0:
                put("m1=0,m2=0" if m2 == 0 else "m1=0,m2!=0", value)
            elif lam is None:
                put("m1!=0,unsolvable", value)
            else:
                put("m1!=0,m2=lam" if m2 == lam else "m1!=0,m2!=lam", value)
    return {k: (c, frozenset(v)) for k, (c, v) in rows.items()}
