"""Character sums over F_{p^h}, exact in Z[zeta_p].

Covers the additive characters chi_b(x) = zeta^Tr(bx), the
quadratic-character Gauss sum, and the special Weil sums

    S(a, b) = sum_x chi(a * x^(p^u + 1) + b * x),   a != 0,

each computed two ways: by brute-force enumeration and by closed form.
The closed forms reduce to the solvability of the twisted affine
equation  a^(p^u) X^(p^(2u)) + a X = -b^(p^u),  which is F_p-linear in
the coefficient vector of X and is solved here by elimination; the
brute-force sums stay available as the independent oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .caps import DEFAULT_ENUM_CAP, check_cap, run_chunks
from .cyclotomic import CyclotomicInt
from .field import FieldCtx, legendre


def additive_char(ctx: FieldCtx, b: int, x: int) -> CyclotomicInt:
    """chi_b(x) = zeta_p^Tr(bx); b = 0 gives the trivial character."""
    return CyclotomicInt.zeta_pow(ctx.p, ctx.trace(ctx.mul(b, x)))


# ----------------------------------------------------------------------
# Gauss sums


def gauss_sum_bruteforce(ctx: FieldCtx, cap: int | None = DEFAULT_ENUM_CAP,
                         jobs: int = 1) -> CyclotomicInt:
    """sum_x eta(x) * zeta^Tr(x) by full enumeration (eta(0) = 0)."""
    check_cap(ctx.q, cap, "Gauss sum enumeration")
    p = ctx.p
    tr = ctx.trace_table
    eta = ctx.eta_table

    def chunk(lo, hi):
        t = tr[lo:hi]
        w = eta[lo:hi]
        plus = np.bincount(t[w == 1], minlength=p)
        minus = np.bincount(t[w == -1], minlength=p)
        return plus.astype(np.int64) - minus.astype(np.int64)

    counts = sum(run_chunks(chunk, ctx.q, jobs))
    return CyclotomicInt.from_exponent_counts(p, counts.tolist())


@lru_cache(maxsize=None)
def quadratic_gauss_sum(p: int) -> CyclotomicInt:
    """The Gauss sum over F_p itself: sum_{x=1}^{p-1} legendre(x) zeta^x."""
    counts = [0] * p
    for x in range(1, p):
        counts[x] = legendre(x, p)
    return CyclotomicInt.from_exponent_counts(p, counts)


@lru_cache(maxsize=None)
def gauss_sum_closed(p: int, h: int) -> CyclotomicInt:
    """Closed form of the degree-h Gauss sum.

    The quadratic character of F_{p^h} factors through the norm and the
    canonical additive character through the trace, so the degree-h sum
    is (-1)^(h-1) times the h-th power of the quadratic Gauss sum over
    F_p.  For even h this collapses to the rational integer
    -((-1)^((p-1)/2) * p)^(h/2) * (-1)^h ... computed exactly in the
    ring, which also fixes the sign that a naive square-root formula
    leaves ambiguous for p = 3 (mod 4).
    """
    if h < 1:
        raise ValueError("h must be >= 1")
    g = quadratic_gauss_sum(p) ** h
    return g if h % 2 == 1 else -g


# ----------------------------------------------------------------------
# The twisted affine solver


class _AffineSolver:
    """Row-reduced form of X -> c^(p^u) X^(p^(2u)) + c X on F_p^n.

    Building the elimination once per (ctx, u, c) makes solving for many
    right-hand sides an O(n^2) matrix-vector product.
    """

    def __init__(self, ctx: FieldCtx, u: int, coeff: int):
        p, n = ctx.p, ctx.n
        cu = ctx.frobenius(coeff, u)
        cols = []
        for j in range(n):
            e = p ** j
            y = ctx.add(ctx.mul(cu, ctx.frobenius(e, 2 * u)), ctx.mul(coeff, e))
            cols.append(ctx.coeffs(y))
        A = np.concatenate([np.array(cols, dtype=np.int64).T,
                            np.eye(n, dtype=np.int64)], axis=1) % p
        pivots = []
        row = 0
        for col in range(n):
            nz = np.nonzero(A[row:, col])[0]
            if nz.size == 0:
                continue
            r0 = row + nz[0]
            if r0 != row:
                A[[row, r0]] = A[[r0, row]]
            A[row] = (A[row] * pow(int(A[row, col]), p - 2, p)) % p
            for i in range(n):
                if i != row and A[i, col]:
                    A[i] = (A[i] - A[i, col] * A[row]) % p
            pivots.append(col)
            row += 1
            if row == n:
                break
        self.ctx = ctx
        self.rank = row
        self.pivots = pivots
        self.R = A[:, :n]
        self.E = A[:, n:]
        free = [c for c in range(n) if c not in pivots]
        basis = []
        for fcol in free:
            v = np.zeros(n, dtype=np.int64)
            v[fcol] = 1
            for i, c in enumerate(pivots):
                v[c] = (-self.R[i, fcol]) % p
            basis.append(v)
        self.kernel_dim = len(basis)
        self._kernel_basis = basis

    def solve_one(self, target: int) -> int | None:
        """One solution of L(X) = target, or None when inconsistent."""
        ctx = self.ctx
        t = np.array(ctx.coeffs(target), dtype=np.int64)
        y = (self.E @ t) % ctx.p
        if self.rank < ctx.n and y[self.rank:].any():
            return None
        x = np.zeros(ctx.n, dtype=np.int64)
        for i, c in enumerate(self.pivots):
            x[c] = y[i]
        return ctx.element_from_coeffs(x.tolist())

    def solve_many(self, targets: np.ndarray):
        """Vectorized solve for an array of target encodings.

        Returns (solvable mask, particular solution encodings).
        """
        ctx = self.ctx
        T = ctx.digits[targets].astype(np.int64).T        # (n, m)
        Y = (self.E @ T) % ctx.p
        ok = np.ones(len(targets), dtype=bool)
        if self.rank < ctx.n:
            ok = ~Y[self.rank:].any(axis=0)
        X = np.zeros_like(Y)
        for i, c in enumerate(self.pivots):
            X[c] = Y[i]
        sols = (X.T @ ctx._ppowers)
        return ok, sols

    def kernel_elements(self) -> tuple[int, ...]:
        ctx = self.ctx
        p = ctx.p
        out = set()
        for combo in itertools.product(range(p), repeat=self.kernel_dim):
            v = np.zeros(ctx.n, dtype=np.int64)
            for c, vec in zip(combo, self._kernel_basis):
                v += c * vec
            out.add(ctx.element_from_coeffs((v % p).tolist()))
        return tuple(sorted(out))

    def all_solutions(self, target: int) -> tuple[int, ...]:
        x0 = self.solve_one(target)
        if x0 is None:
            return ()
        base = np.array(self.ctx.coeffs(x0), dtype=np.int64)
        p = self.ctx.p
        out = set()
        for combo in itertools.product(range(p), repeat=self.kernel_dim):
            v = base.copy()
            for c, vec in zip(combo, self._kernel_basis):
                v += c * vec
            out.add(self.ctx.element_from_coeffs((v % p).tolist()))
        return tuple(sorted(out))


@lru_cache(maxsize=512)
def _solver(ctx: FieldCtx, u: int, coeff: int) -> _AffineSolver:
    return _AffineSolver(ctx, u % ctx.n, coeff)


def frobenius_affine_solve(ctx: FieldCtx, u: int, a: int, b: int) -> tuple[int, ...]:
    """Full solution set of a^(p^u) X^(p^(2u)) + a X = -b^(p^u).

    The set is empty or a coset of the kernel; elements are returned
    sorted by encoding.
    """
    if a == 0:
        raise ValueError("coefficient a must be nonzero")
    target = ctx.neg(ctx.frobenius(b, u))
    return _solver(ctx, u, a).all_solutions(target)


def frobenius_kernel(ctx: FieldCtx, u: int, a: int) -> tuple[int, ...]:
    """Kernel of X -> a^(p^u) X^(p^(2u)) + a X, sorted by encoding."""
    if a == 0:
        raise ValueError("coefficient a must be nonzero")
    return _solver(ctx, u, a).kernel_elements()


def _sign_condition(ctx: FieldCtx, u: int, a: int) -> bool:
    """True iff a^((q-1)/(p^v+1)) equals (-1)^(h/(2v)) in the field.

    Only meaningful when h/v is even (the exponent is integral there).
    """
    h = ctx.n
    v = math.gcd(h, u)
    e = (ctx.q - 1) // (ctx.p ** v + 1)
    target = 1 if (h // (2 * v)) % 2 == 0 else ctx.p - 1
    return ctx.pow(a, e) == target


def is_permutation_f(ctx: FieldCtx, u: int, a: int) -> bool:
    """Whether X -> a^(p^u) X^(p^(2u)) + a X permutes the field.

    Decided arithmetically: always a permutation when h/gcd(h,u) is
    odd; otherwise a permutation exactly when the sign condition on
    a^((q-1)/(p^v+1)) fails.
    """
    if a == 0:
        raise ValueError("coefficient a must be nonzero")
    h = ctx.n
    v = math.gcd(h, u)
    if (h // v) % 2 == 1:
        return True
    return not _sign_condition(ctx, u, a)


def count_solvable_b(ctx: FieldCtx, u: int, a: int) -> int:
    """Number of b for which the twisted affine equation is solvable.

    Requires the non-permutation condition (otherwise every b is
    solvable and the count is trivially q); computed by rank-nullity
    through the image of the linear map, since b -> -b^(p^u) is a
    bijection of the field.
    """
    if a == 0:
        raise ValueError("coefficient a must be nonzero")
    if is_permutation_f(ctx, u, a):
        raise ValueError("map is a permutation; every b is solvable")
    return ctx.p ** (ctx.n - _solver(ctx, u, a).kernel_dim)


# ----------------------------------------------------------------------
# The special Weil sums


@dataclass(frozen=True)
class WeilSumParams:
    """Parameters of S(a, b) = sum_x chi(a x^(p^u+1) + b x) over ctx."""

    ctx: FieldCtx
    u: int
    a: int
    b: int

    def __post_init__(self):
        if self.u < 1:
            raise ValueError("u must be >= 1")
        if self.a == 0:
            raise ValueError("a must be nonzero")
        if not (0 <= self.a < self.ctx.q and 0 <= self.b < self.ctx.q):
            raise ValueError("a and b must be elements of the field")

    @property
    def v(self) -> int:
        return math.gcd(self.ctx.n, self.u)


@lru_cache(maxsize=256)
def _weil_a_part(ctx: FieldCtx, u: int, a: int) -> np.ndarray:
    """Exponent vector Tr(a * x^(p^u+1)) over all x, int16."""
    fu = ctx.pow_map(ctx.p ** (u % ctx.n) + 1)
    return ctx.trace_table[ctx.mul_vec(a, fu)]


def weil_sum_bruteforce(params: WeilSumParams, cap: int | None = DEFAULT_ENUM_CAP,
                        jobs: int = 1) -> CyclotomicInt:
    """S(a, b) by full enumeration, as an exact cyclotomic integer."""
    ctx = params.ctx
    check_cap(ctx.q, cap, "Weil sum enumeration")
    p = ctx.p
    ea = _weil_a_part(ctx, params.u, params.a)
    eb = ctx.trace_row(params.b)

    def chunk(lo, hi):
        e = (ea[lo:hi] + eb[lo:hi]) % p
        return np.bincount(e, minlength=p).astype(np.int64)

    counts = sum(run_chunks(chunk, ctx.q, jobs))
    return CyclotomicInt.from_exponent_counts(p, counts.tolist())


def _monomial_exponent(ctx: FieldCtx, u: int, a: int, x0: int) -> int:
    """Tr(-a * x0^(p^u+1)), the phase carried by a shifted square sum."""
    t = ctx.mul(x0, ctx.frobenius(x0, u))
    return ctx.trace(ctx.mul(ctx.neg(a), t))


def weil_sum_closed(params: WeilSumParams) -> CyclotomicInt:
    """S(a, b) by the closed-form case analysis.

    b = 0 dispatches on the parity of h/v (Gauss-sum multiple) or, for
    even h/v, on the parity of s/v = h/(2v) together with the sign
    condition on a.  For b != 0 the value is a root-of-unity multiple
    of the b = 0 magnitude when the twisted map permutes the field, a
    boosted magnitude on the solvable fibers when it does not, and 0 on
    the unsolvable ones.
    """
    ctx, u, a, b = params.ctx, params.u, params.a, params.b
    p, h, q = ctx.p, ctx.n, ctx.q
    v = params.v

    if b == 0:
        if (h // v) % 2 == 1:
            return gauss_sum_closed(p, h) * ctx.quadratic_char(a)
        s = h // 2
        hit = _sign_condition(ctx, u, a)  # (-1)^(s/v) == (-1)^(h/2v) here
        if (s // v) % 2 == 0:
            return CyclotomicInt.from_int(p, -(p ** (s + v)) if hit else p ** s)
        return CyclotomicInt.from_int(p, p ** (s + v) if hit else -(p ** s))

    solver = _solver(ctx, u, a)
    target = ctx.neg(ctx.frobenius(b, u))
    x0 = solver.solve_one(target)
    if is_permutation_f(ctx, u, a):
        zeta = CyclotomicInt.zeta_pow(p, _monomial_exponent(ctx, u, a, x0))
        if (h // v) % 2 == 1:
            return gauss_sum_closed(p, h) * ctx.quadratic_char(a) * zeta
        sign = -1 if (h // (2 * v)) % 2 == 1 else 1
        return CyclotomicInt.from_int(p, sign * p ** (h // 2)) * zeta
    if x0 is None:
        return CyclotomicInt.zero(p)
    zeta = CyclotomicInt.zeta_pow(p, _monomial_exponent(ctx, u, a, x0))
    sign = 1 if (h // (2 * v)) % 2 == 1 else -1  # -(-1)^(h/2v)
    return CyclotomicInt.from_int(p, sign * p ** (h // 2 + v)) * zeta
