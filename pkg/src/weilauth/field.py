"""Exact arithmetic in F_p and F_{p^n} for odd primes p.

An element with coefficient vector (c0, ..., c_{n-1}) over F_p is
encoded as the integer sum_i c_i * p**i.  Constants are then their own
encodings, enumeration order is the numeric order of encodings, and the
encoding round-trips through the "c0,c1,..." text form used by the CLI
and the JSON output.

A FieldCtx is immutable after construction and every operation is a
pure function of its arguments, so contexts and element encodings can
be shared freely between threads.  Discrete log/antilog tables give
O(1) multiplicative arithmetic; the larger numpy tables that back bulk
enumeration are built lazily and only read afterwards.
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from .caps import DEFAULT_ENUM_CAP, CapExceeded, check_cap

# Hard memory guard for q x q tables; independent of the tunable caps.
TABLE_LIMIT = 3 ** 8


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


def prime_factors(m: int) -> list[int]:
    """Distinct prime factors by trial division (desk scale only)."""
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out.append(m)
    return out


def legendre(x: int, p: int) -> int:
    """Quadratic character of F_p: 0 at 0, +1 on squares, -1 otherwise."""
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


# ----------------------------------------------------------------------
# Dense polynomial helpers over F_p (little-endian coefficient lists).
# Only used during field construction; element arithmetic afterwards
# goes through the log/antilog tables.

def _poly_eval(f, c, p):
    acc = 0
    for coeff in reversed(f):
        acc = (acc * c + coeff) % p
    return acc


def _poly_mulmod(a, b, f, p):
    """a*b mod (monic f), inputs reduced, output of length deg(f)."""
    n = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, n - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            off = d - n
            for k in range(n):
                prod[off + k] = (prod[off + k] - c * f[k]) % p
    out = prod[:n]
    out += [0] * (n - len(out))
    return out


def _poly_powmod(a, e, f, p):
    n = len(f) - 1
    result = [1] + [0] * (n - 1)
    base = list(a) + [0] * (n - len(a))
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_deg(a):
    for i in range(len(a) - 1, -1, -1):
        if a[i]:
            return i
    return -1


def _poly_rem(a, b, p):
    """Remainder of a by b (b nonzero) over F_p."""
    a = list(a)
    db = _poly_deg(b)
    inv = pow(b[db], p - 2, p)
    for d in range(_poly_deg(a), db - 1, -1):
        c = (a[d] * inv) % p
        if c:
            off = d - db
            for k in range(db + 1):
                a[off + k] = (a[off + k] - c * b[k]) % p
    return a[:db] if db > 0 else [0]


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while _poly_deg(b) >= 0:
        a, b = b, _poly_rem(a, b, p)
    return a


def is_irreducible(modulus, p: int) -> bool:
    """Deterministic irreducibility test for a monic polynomial over F_p.

    Combines the cheap no-root check with the classical criterion:
    x^(p^n) = x mod f and gcd(x^(p^(n/l)) - x, f) = 1 for every prime
    l dividing n.
    """
    f = list(modulus)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if any(_poly_eval(f, c, p) == 0 for c in range(p)):
        return False
    x = [0, 1] + [0] * (n - 2)

    def frob_iter(times):
        t = x
        for _ in range(times):
            t = _poly_powmod(t, p, f, p)
        return t

    if frob_iter(n) != x:
        return False
    for ell in prime_factors(n):
        d = n // ell
        t = frob_iter(d)
        diff = [(ti - xi) % p for ti, xi in zip(t, x)]
        if _poly_deg(diff) < 0:
            return False  # f splits into factors of degree <= d < n
        if _poly_deg(_poly_gcd(diff, f, p)) > 0:
            return False
    return True


def smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n over F_p.

    Candidates are compared by their coefficient tuples low degree
    first, so the choice is reproducible run to run.
    """
    if n == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=n):
        f = tail + (1,)
        if is_irreducible(f, p):
            return f
    raise RuntimeError(f"no irreducible polynomial of degree {n} over F_{p}")


# ----------------------------------------------------------------------


class FieldCtx:
    """A concrete F_{p^n} with a fixed modulus and primitive element.

    Use make_field() to construct one; the constructor assumes the
    modulus is already validated.
    """

    def __init__(self, p: int, n: int, modulus: tuple[int, ...]):
        self.p = p
        self.n = n
        self.q = p ** n
        self.modulus = tuple(c % p for c in modulus)
        self._np_cache: dict = {}
        g_tuple = self._find_primitive()
        self._build_log_tables(g_tuple)

    # -- construction helpers ------------------------------------------

    def _encode(self, coeffs) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = acc * self.p + (c % self.p)
        return acc

    def _decode(self, idx: int) -> list[int]:
        out = []
        for _ in range(self.n):
            out.append(idx % self.p)
            idx //= self.p
        return out

    def _find_primitive(self) -> list[int]:
        q, p, f = self.q, self.p, list(self.modulus)
        one = [1] + [0] * (self.n - 1)
        factors = prime_factors(q - 1)
        for idx in range(1, q):
            cand = self._decode(idx)
            if all(_poly_powmod(cand, (q - 1) // ell, f, p) != one
                   for ell in factors):
                return cand
        raise RuntimeError("no primitive element found; modulus is not irreducible")

    def _build_log_tables(self, g_tuple) -> None:
        q, p, f = self.q, self.p, list(self.modulus)
        exp = np.empty(q - 1, dtype=np.int64)
        cur = [1] + [0] * (self.n - 1)
        for k in range(q - 1):
            exp[k] = self._encode(cur)
            cur = _poly_mulmod(cur, g_tuple, f, p)
        if cur != [1] + [0] * (self.n - 1):
            raise RuntimeError("primitive element does not have full order")
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        self.exp_table = exp
        self.log_table = log
        self.g = int(exp[1]) if q > 2 else 1
        self._exp_list = exp.tolist()
        self._log_list = log.tolist()

    # -- scalar operations ---------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.n):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.n):
            out += ((a - b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.n):
            out += (-a % p) * mult
            a //= p
            mult *= p
        return out

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp_list[(self._log_list[a] + self._log_list[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative inverse")
        return self._exp_list[-self._log_list[a] % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ValueError("zero has no negative powers")
            return 0
        return self._exp_list[(self._log_list[a] * e) % (self.q - 1)]

    def frobenius(self, a: int, i: int) -> int:
        """a raised to the p^i power (the i-fold Frobenius image)."""
        if i < 0:
            raise ValueError("frobenius exponent must be >= 0")
        if a == 0:
            return 0
        return self._exp_list[(self._log_list[a] * pow(self.p, i, self.q - 1)) % (self.q - 1)]

    def trace(self, a: int) -> int:
        """Absolute trace into F_p, returned as an int in [0, p)."""
        return self._trace_list[a]

    def quadratic_char(self, a: int) -> int:
        """Quadratic character: 0 at 0, +1 on nonzero squares, -1 otherwise."""
        if a == 0:
            return 0
        return 1 if self._log_list[a] % 2 == 0 else -1

    def elements(self, cap: int | None = DEFAULT_ENUM_CAP) -> range:
        """All q elements in encoding order, starting at 0."""
        check_cap(self.q, cap, "field enumeration")
        return range(self.q)

    # -- text encoding ---------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        return tuple(self._decode(a))

    def element_from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) != self.n:
            raise ValueError(f"expected {self.n} coefficients, got {len(coeffs)}")
        return self._encode(coeffs)

    def parse_element(self, text: str) -> int:
        parts = [s.strip() for s in text.split(",")]
        try:
            coeffs = [int(s) for s in parts]
        except ValueError:
            raise ValueError(f"bad element string {text!r}") from None
        return self.element_from_coeffs(coeffs)

    def format_element(self, a: int) -> str:
        return ",".join(str(c) for c in self._decode(a))

    def format_modulus(self) -> str:
        return ",".join(str(c) for c in self.modulus)

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, n={self.n}, modulus='{self.format_modulus()}')"

    # -- numpy enumeration layer ----------------------------------------

    @cached_property
    def digits(self) -> np.ndarray:
        """(q, n) int16 matrix of coefficient vectors in encoding order."""
        v = np.arange(self.q, dtype=np.int64)
        out = np.empty((self.q, self.n), dtype=np.int16)
        for i in range(self.n):
            out[:, i] = v % self.p
            v //= self.p
        return out

    @cached_property
    def _ppowers(self) -> np.ndarray:
        return self.p ** np.arange(self.n, dtype=np.int64)

    def frob_perm(self, i: int) -> np.ndarray:
        """Permutation array x -> x^(p^i) over all encodings."""
        key = ("frob", i % self.n)
        if key not in self._np_cache:
            e = pow(self.p, i % self.n, self.q - 1)
            perm = np.zeros(self.q, dtype=np.int64)
            ks = np.arange(self.q - 1, dtype=np.int64)
            perm[self.exp_table] = self.exp_table[(ks * e) % (self.q - 1)]
            self._np_cache[key] = perm
        return self._np_cache[key]

    def pow_map(self, e: int) -> np.ndarray:
        """Array x -> x^e over all encodings (0^0 = 1 by convention)."""
        key = ("pow", e)
        if key not in self._np_cache:
            out = np.zeros(self.q, dtype=np.int64)
            ks = np.arange(self.q - 1, dtype=np.int64)
            out[self.exp_table] = self.exp_table[(ks * e) % (self.q - 1)]
            out[0] = 1 if e == 0 else 0
            self._np_cache[key] = out
        return self._np_cache[key]

    @cached_property
    def trace_table(self) -> np.ndarray:
        acc = np.zeros((self.q, self.n), dtype=np.int32)
        for i in range(self.n):
            acc += self.digits[self.frob_perm(i)]
        acc %= self.p
        if self.n > 1 and acc[:, 1:].any():
            raise RuntimeError("trace landed outside the prime subfield")
        return acc[:, 0].astype(np.int16)

    @cached_property
    def _trace_list(self) -> list[int]:
        return self.trace_table.tolist()

    @cached_property
    def eta_table(self) -> np.ndarray:
        """Quadratic character over all encodings: int8 in {-1, 0, +1}."""
        out = np.ones(self.q, dtype=np.int8)
        out[self.exp_table[1::2]] = -1
        out[0] = 0
        return out

    def mul_vec(self, a: int, xs: np.ndarray) -> np.ndarray:
        """Elementwise a * xs for a fixed element a."""
        if a == 0:
            return np.zeros(len(xs), dtype=np.int64)
        idx = (self._log_list[a] + self.log_table[xs]) % (self.q - 1)
        return np.where(xs == 0, 0, self.exp_table[idx])

    def mul_pairwise(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        idx = (self.log_table[xs] + self.log_table[ys]) % (self.q - 1)
        return np.where((xs == 0) | (ys == 0), 0, self.exp_table[idx])

    def add_pairwise(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return ((self.digits[xs] + self.digits[ys]) % self.p) @ self._ppowers

    def neg_vec(self, xs: np.ndarray) -> np.ndarray:
        return ((self.p - self.digits[xs]) % self.p) @ self._ppowers

    def trace_row(self, b: int) -> np.ndarray:
        """Vector Tr(b*x) over all x, as int16 exponents in [0, p)."""
        if self.q <= TABLE_LIMIT:
            return self.bilinear_trace_table()[b]
        return self.trace_table[self.mul_vec(b, np.arange(self.q, dtype=np.int64))]

    def bilinear_trace_table(self) -> np.ndarray:
        """(q, q) int16 table of Tr(a*b); guarded by TABLE_LIMIT."""
        key = "trmul"
        if key not in self._np_cache:
            if self.q > TABLE_LIMIT:
                raise CapExceeded(
                    f"bilinear trace table for q={self.q} exceeds table limit {TABLE_LIMIT}")
            q = self.q
            table = np.zeros((q, q), dtype=np.int16)
            logs = self.log_table
            tr = self.trace_table
            chunk = max(1, (1 << 22) // max(q, 1))
            for lo in range(1, q, chunk):
                hi = min(lo + chunk, q)
                idx = (logs[lo:hi, None] + logs[None, 1:]) % (q - 1)
                table[lo:hi, 1:] = tr[self.exp_table[idx]]
            table[0, :] = 0
            table[:, 0] = 0
            self._np_cache[key] = table
        return self._np_cache[key]


def make_field(p: int, n: int, modulus=None) -> FieldCtx:
    """Build F_{p^n} with a verified-irreducible modulus.

    If no modulus is supplied, the lexicographically smallest monic
    irreducible polynomial of degree n is chosen (coefficients compared
    low degree first), and the primitive element is the first generator
    in enumeration order.  Supplied moduli may be a "c0,...,cn" string
    or a coefficient sequence and are verified irreducible.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if p == 2:
        raise ValueError("p must be odd")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"extension degree must be >= 1, got {n}")
    if modulus is None:
        mod = smallest_irreducible(p, n)
    else:
        if isinstance(modulus, str):
            try:
                mod = tuple(int(s.strip()) for s in modulus.split(","))
            except ValueError:
                raise ValueError(f"bad modulus string {modulus!r}") from None
        else:
            mod = tuple(int(c) for c in modulus)
        mod = tuple(c % p for c in mod)
        if len(mod) != n + 1:
            raise ValueError(f"modulus must have {n + 1} coefficients, got {len(mod)}")
        if mod[-1] != 1:
            raise ValueError("modulus must be monic")
        if not is_irreducible(mod, p):
            raise ValueError(f"modulus {','.join(map(str, mod))} is reducible over F_{p}")
    return FieldCtx(p, n, mod)
