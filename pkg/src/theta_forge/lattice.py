"""Even positive-definite forms and exact lattice-point bookkeeping.

The enumeration engine walks integer vectors z = h0 + scale*u with
Q(z) <= bound by completing squares against an exact LDL factorization.
Pruning runs in floating point with an inflated bound; membership and the
exponent of every surviving vector are settled exactly afterwards, so the
histograms feeding the series expansions carry no rounding.
"""

from __future__ import annotations

import json
import math
from cmath import exp as cexp
from fractions import Fraction
from itertools import product
from math import lcm, pi

import numpy as np

from .arith import GaussianRational, kronecker_symbol


class InvalidFormError(ValueError):
    """Gram matrix rejected; .code names the first failed requirement."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class EnumerationBudgetError(RuntimeError):
    """Estimated lattice-point count exceeds the allowed budget."""


def _ldl_exact(gram):
    """A = L D L' over Q with unit lower-triangular L; raises unless A > 0."""
    f = len(gram)
    L = [[Fraction(int(i == j)) for j in range(f)] for i in range(f)]
    d = []
    for j in range(f):
        dj = Fraction(gram[j][j]) - sum(
            (L[j][k] * L[j][k]) * d[k] for k in range(j)
        )
        if dj <= 0:
            raise InvalidFormError(
                "not-positive-definite",
                f"pivot {j} of the LDL factorization is {dj}",
            )
        d.append(dj)
        for i in range(j + 1, f):
            L[i][j] = (
                Fraction(gram[i][j])
                - sum(L[i][k] * L[j][k] * d[k] for k in range(j))
            ) / dj
    return L, d


def _inverse_exact(gram):
    f = len(gram)
    aug = [
        [Fraction(gram[i][j]) for j in range(f)]
        + [Fraction(int(i == j)) for j in range(f)]
        for i in range(f)
    ]
    for col in range(f):
        piv = next(r for r in range(col, f) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(f):
            if r != col and aug[r][col]:
                fac = aug[r][col]
                aug[r] = [x - fac * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[f:]) for row in aug)


class QuadraticForm:
    """Positive-definite integral Gram matrix with even diagonal, even rank.

    Q(x) = x'Ax/2 and <x,y> = x'Ay throughout.  Rejections carry an error
    code so callers can distinguish a typo from a genuinely unsupported
    matrix.
    """

    __slots__ = ("gram", "rank", "det", "level", "inverse_gram", "_np", "_ldl")

    def __init__(self, gram):
        rows = [tuple(row) for row in gram]
        f = len(rows)
        if f == 0 or any(len(r) != f for r in rows):
            raise InvalidFormError("not-square", "Gram matrix must be square and non-empty")
        for r in rows:
            for x in r:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise InvalidFormError("not-integer", f"entry {x!r} is not an integer")
        for i in range(f):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise InvalidFormError("not-symmetric", f"entries ({i},{j}) and ({j},{i}) differ")
        for i in range(f):
            if rows[i][i] % 2:
                raise InvalidFormError("odd-diagonal", f"diagonal entry {rows[i][i]} at ({i},{i}) is odd")
        if f % 2:
            raise InvalidFormError("odd-rank", f"rank {f} is odd; only even rank is supported")
        self.gram = tuple(rows)
        self.rank = f
        self._ldl = _ldl_exact(rows)
        det = Fraction(1)
        for dj in self._ldl[1]:
            det *= dj
        assert det.denominator == 1 and det > 0
        self.det = int(det)
        self.inverse_gram = _inverse_exact(rows)
        n0 = 1
        for row in self.inverse_gram:
            for x in row:
                n0 = lcm(n0, x.denominator)
        if any((n0 * self.inverse_gram[i][i]) % 2 for i in range(f)):
            n0 *= 2
        self.level = n0
        self._np = np.array(rows, dtype=np.int64)

    @property
    def half_rank(self) -> int:
        return self.rank // 2

    def q_value(self, x):
        """Q(x) = x'Ax/2, exact; integer vectors give an integer."""
        acc = Fraction(0)
        for i, xi in enumerate(x):
            row = self.gram[i]
            acc += xi * sum(row[j] * x[j] for j in range(self.rank))
        acc = Fraction(acc, 2)
        return int(acc) if acc.denominator == 1 else acc

    def bilinear(self, x, y):
        """<x,y> = x'Ay; exact for rational input."""
        acc = 0
        for i, xi in enumerate(x):
            row = self.gram[i]
            acc = acc + xi * sum(row[j] * y[j] for j in range(self.rank))
        return acc

    def character(self, n: int) -> int:
        disc = self.det if self.half_rank % 2 == 0 else -self.det
        return kronecker_symbol(disc, n)

    def dual(self) -> "QuadraticForm":
        """Form on the adjugate matrix det(A) * A^-1; always integral and even."""
        adj = []
        for i in range(self.rank):
            row = []
            for j in range(self.rank):
                x = self.det * self.inverse_gram[i][j]
                assert x.denominator == 1
                row.append(int(x))
            adj.append(tuple(row))
        return QuadraticForm(adj)

    def congruence_classes(self):
        """All classes h mod N with A h = 0 mod N; exactly det(A) of them."""
        N = self.level
        out = []
        for h in product(range(N), repeat=self.rank):
            if all(
                sum(self.gram[i][j] * h[j] for j in range(self.rank)) % N == 0
                for i in range(self.rank)
            ):
                out.append(CongruenceClass(self, h))
        assert len(out) == self.det
        return out

    def __eq__(self, other):
        if not isinstance(other, QuadraticForm):
            return NotImplemented
        return self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"QuadraticForm(rank={self.rank}, det={self.det}, level={self.level})"


class CongruenceClass:
    """A residue h mod N with A h = 0 mod N for a fixed form."""

    __slots__ = ("form", "rep")

    def __init__(self, form: QuadraticForm, rep):
        N = form.level
        rep = tuple(int(x) % N for x in rep)
        if len(rep) != form.rank:
            raise ValueError("representative has the wrong length")
        for i in range(form.rank):
            if sum(form.gram[i][j] * rep[j] for j in range(form.rank)) % N:
                raise ValueError(f"A h is not 0 mod {N} for h = {rep}")
        self.form = form
        self.rep = rep

    @classmethod
    def zero(cls, form: QuadraticForm) -> "CongruenceClass":
        return cls(form, (0,) * form.rank)

    def __eq__(self, other):
        if not isinstance(other, CongruenceClass):
            return NotImplemented
        return self.form == other.form and self.rep == other.rep

    def __hash__(self):
        return hash((self.form, self.rep))

    def __repr__(self):
        return f"CongruenceClass({self.rep} mod {self.form.level})"


def _as_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(Fraction(x))


class InsertionVector:
    """v = sqrt(s) * w with s a positive rational and w a Q(i)-vector.

    Even powers of <v,m> stay in Q(i): <v,m>^(2n) = s^n (w'Am)^(2n), which
    is what keeps the inserted series exact.  Components of w may be
    complex; isotropic directions such as (1, i) on a diagonal form arise
    that way.
    """

    __slots__ = ("w", "s")

    def __init__(self, w, s=1):
        self.w = tuple(_as_gaussian(x) for x in w)
        self.s = Fraction(s)
        if self.s <= 0:
            raise ValueError("scaling s must be positive")

    @classmethod
    def from_root(cls, root) -> "InsertionVector":
        # a root has Q = 1; dividing by sqrt(2) lands on <v,v> = 1
        return cls(tuple(int(x) for x in root), Fraction(1, 2))

    def norm(self, form: QuadraticForm) -> GaussianRational:
        """<v,v> = s * w'Aw (bilinear, no conjugation)."""
        acc = GaussianRational(0)
        for i, wi in enumerate(self.w):
            row = form.gram[i]
            inner = GaussianRational(0)
            for j in range(form.rank):
                inner = inner + row[j] * self.w[j]
            acc = acc + wi * inner
        return acc * self.s

    def is_unit(self, form) -> bool:
        return self.norm(form) == GaussianRational(1)

    def is_null(self, form) -> bool:
        return not self.norm(form)

    def integral_weights(self, form: QuadraticForm):
        """(den, weight rows) with weight_i . m = den * component_i of w'Am.

        One row when w'A is real, two (real then imaginary part) otherwise.
        """
        wa = []
        for j in range(form.rank):
            col = GaussianRational(0)
            for i in range(form.rank):
                col = col + self.w[i] * form.gram[i][j]
            wa.append(col)
        den = 1
        for c in wa:
            den = lcm(den, c.re.denominator, c.im.denominator)
        re_row = tuple(int(den * c.re) for c in wa)
        im_row = tuple(int(den * c.im) for c in wa)
        if any(im_row):
            return den, (re_row, im_row)
        return den, (re_row,)

    def pairing_value(self, den: int, ts) -> GaussianRational:
        """Reassemble w'Am from its integral weights: (t1 + i t2)/den."""
        t1 = ts[0]
        t2 = ts[1] if len(ts) > 1 else 0
        return GaussianRational(Fraction(t1, den), Fraction(t2, den))

    def __eq__(self, other):
        if not isinstance(other, InsertionVector):
            return NotImplemented
        return self.w == other.w and self.s == other.s

    def __hash__(self):
        return hash((self.w, self.s))

    def __repr__(self):
        return f"InsertionVector(w={list(map(str, self.w))}, s={self.s})"


_BALL_VOLUME_CACHE = {}


def _ball_volume(f: int) -> float:
    if f not in _BALL_VOLUME_CACHE:
        _BALL_VOLUME_CACHE[f] = pi ** (f / 2) / math.gamma(f / 2 + 1)
    return _BALL_VOLUME_CACHE[f]


def _leaf_estimate(form: QuadraticForm, bound: int, scale: int) -> float:
    # ellipsoid volume for z'Az <= 2(bound+1), shrunk to the u-lattice
    return (
        _ball_volume(form.rank)
        * (2.0 * (bound + 1)) ** (form.rank / 2)
        / (math.sqrt(form.det) * scale ** form.rank)
    )


DEFAULT_BUDGET = 60_000_000


def _leaf_chunks(form: QuadraticForm, bound: int, scale: int, h0, chunk=150_000):
    """Yield (Z, e) blocks: integer vectors z = h0 + scale*u with Q(z) = e <= bound.

    Breadth-first over coordinates f-1 .. 0, float pruning against an
    inflated bound, exact integer exponents at the leaves.
    """
    f = form.rank
    L, d = form._ldl
    Lf = np.array([[float(x) for x in row] for row in L])
    df = np.array([float(x) for x in d])
    margin = 1e-6 * (1.0 + bound)
    bf = bound + margin
    h0 = np.array(h0, dtype=np.int64)

    stack = [(np.zeros((1, f), dtype=np.int64), np.zeros(1), 0)]
    while stack:
        Z, S, depth = stack.pop()
        j = f - 1 - depth
        if depth:
            dot = Z[:, j + 1:].astype(np.float64) @ Lf[j + 1:, j]
        else:
            dot = np.zeros(len(Z))
        rad = np.sqrt(np.maximum(0.0, 2.0 * (bf - S) / df[j]))
        lo = np.ceil((-dot - rad - h0[j]) / scale - 1e-9).astype(np.int64)
        hi = np.floor((-dot + rad - h0[j]) / scale + 1e-9).astype(np.int64)
        counts = np.maximum(0, hi - lo + 1)
        total = int(counts.sum())
        if total == 0:
            continue
        rep = np.repeat(np.arange(len(Z)), counts)
        starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
        offs = np.arange(total, dtype=np.int64) - np.repeat(starts, counts)
        u = lo[rep] + offs
        zj = h0[j] + scale * u
        Z2 = Z[rep]
        Z2[:, j] = zj
        y = zj + dot[rep]
        S2 = S[rep] + 0.5 * df[j] * y * y
        keep = S2 <= bf
        Z2, S2 = Z2[keep], S2[keep]
        if len(Z2) == 0:
            continue
        if depth + 1 == f:
            e = np.rint(S2).astype(np.int64)
            assert float(np.abs(S2 - e).max()) < 1e-2
            inside = e <= bound
            if inside.any():
                yield Z2[inside], e[inside]
        else:
            for i in range(0, len(Z2), chunk):
                stack.append((Z2[i:i + chunk], S2[i:i + chunk], depth + 1))


def insertion_histogram(
    form: QuadraticForm,
    bound: int,
    *,
    scale: int = 1,
    h0=None,
    weights=(),
    budget: int = DEFAULT_BUDGET,
):
    """Histogram of lattice vectors z = h0 + scale*u with Q(z) <= bound.

    Keys are (e, t_1, ..., t_m) with e = Q(z) and t_i = weight_i . z, all
    exact integers; values count the vectors landing in the cell.  Results
    are cached per (form, scale, h0, weights) and reused whenever a later
    call asks for the same or a smaller bound.
    """
    if h0 is None:
        h0 = (0,) * form.rank
    h0 = tuple(int(x) for x in h0)
    weights = tuple(tuple(int(x) for x in wrow) for wrow in weights)
    key = (form.gram, scale, h0, weights)
    cached = _CELL_CACHE.get(key)
    if cached is not None and cached[0] >= bound:
        return {k: v for k, v in cached[1].items() if k[0] <= bound}
    est = _leaf_estimate(form, bound, scale)
    if est > budget:
        raise EnumerationBudgetError(
            f"estimated {est:.2e} lattice points exceeds budget {budget:.2e}"
        )
    if not weights:
        # a finer histogram for the same lattice slice can be projected
        for (g2, s2, h2, w2), (b2, cells2) in _CELL_CACHE.items():
            if (g2, s2, h2) == (form.gram, scale, h0) and w2 and b2 >= bound:
                proj: dict = {}
                for k2, c2 in cells2.items():
                    if k2[0] <= bound:
                        kk = (k2[0],)
                        proj[kk] = proj.get(kk, 0) + c2
                _CELL_CACHE[key] = (bound, proj)
                return dict(proj)
    wmat = (
        np.array(weights, dtype=np.int64).T
        if weights
        else np.zeros((form.rank, 0), dtype=np.int64)
    )
    cells: dict = {}
    for Z, e in _leaf_chunks(form, bound, scale, h0):
        ts = Z @ wmat if weights else None
        _accumulate_cells(cells, e, ts)
    _CELL_CACHE[key] = (bound, cells)
    return dict(cells)


def _accumulate_cells(cells: dict, e, ts):
    """Fold one leaf block into the histogram via composite-code bincount."""
    if ts is None:
        cols = [e]
    else:
        cols = [e] + [ts[:, i] for i in range(ts.shape[1])]
    lows = [int(c.min()) for c in cols]
    spans = [int(c.max()) - lo + 1 for c, lo in zip(cols, lows)]
    space = 1
    for s in spans:
        space *= s
    if space > 50_000_000:
        stacked = np.column_stack(cols)
        uniq, counts = np.unique(stacked, axis=0, return_counts=True)
        for row, c in zip(uniq, counts):
            k = tuple(int(x) for x in row)
            cells[k] = cells.get(k, 0) + int(c)
        return
    codes = np.zeros_like(cols[0])
    for col, lo, span in zip(cols, lows, spans):
        codes = codes * span + (col - lo)
    binc = np.bincount(codes, minlength=space)
    for code in np.nonzero(binc)[0]:
        k = []
        rem = int(code)
        for span in reversed(spans):
            k.append(rem % span)
            rem //= span
        k = tuple(x + lo for x, lo in zip(reversed(k), lows))
        cells[k] = cells.get(k, 0) + int(binc[code])


_CELL_CACHE: dict = {}


def clear_cell_cache():
    _CELL_CACHE.clear()


def enumerate_upto(form: QuadraticForm, bound: int):
    """All integer vectors with Q(m) <= bound, lexicographically sorted."""
    out = []
    for Z, _ in _leaf_chunks(form, bound, 1, (0,) * form.rank):
        out.extend(tuple(int(x) for x in row) for row in Z)
    out.sort()
    return out


def enumerate_congruence(form: QuadraticForm, h, bound):
    """Vectors m = h mod N with Q(m)/N^2 <= bound, lexicographically sorted.

    The bound is in the exponent units of the congruence theta series,
    so h = 0 with bound b returns N times the plain enumeration at b.
    """
    rep = h.rep if isinstance(h, CongruenceClass) else tuple(int(x) for x in h)
    if not isinstance(h, CongruenceClass):
        CongruenceClass(form, rep)  # validates A h = 0 mod N
    N = form.level
    raw = int(Fraction(bound) * N * N)
    out = []
    for Z, _ in _leaf_chunks(form, raw, N, rep):
        out.extend(tuple(int(x) for x in row) for row in Z)
    out.sort()
    return out


def first_root(form: QuadraticForm):
    """Lexicographically smallest vector with Q = 1, or None."""
    roots = [m for m in enumerate_upto(form, 1) if form.q_value(m) == 1]
    return roots[0] if roots else None


def minimal_vector(form: QuadraticForm):
    """(m, Q(m)) with Q minimal positive, lexicographically smallest m."""
    bound = 1
    while True:
        nonzero = [m for m in enumerate_upto(form, bound) if any(m)]
        if nonzero:
            mu = min(form.q_value(m) for m in nonzero)
            return min(m for m in nonzero if form.q_value(m) == mu), mu
        bound *= 2


def unit_insertion_vector(form: QuadraticForm) -> InsertionVector:
    """An insertion vector with <v,v> = 1 built from a shortest vector."""
    root = first_root(form)
    if root is not None:
        return InsertionVector.from_root(root)
    m, mu = minimal_vector(form)
    return InsertionVector(m, Fraction(1, 2 * mu))


def gauss_sum(form: QuadraticForm, a: int, d: int, c: int, h, q) -> complex:
    """sum over g = h mod N, g mod cN of e((a Q(g) + d Q(q) + g'Aq) / cN^2).

    Phases are exact rationals mod 1; only the final exponentials are
    floating point.  c must be positive.
    """
    if c <= 0:
        raise ValueError("gauss_sum requires c > 0")
    hrep = h.rep if isinstance(h, CongruenceClass) else tuple(int(x) for x in h)
    qrep = q.rep if isinstance(q, CongruenceClass) else tuple(int(x) for x in q)
    N = form.level
    qq = form.q_value(qrep)
    denom = c * N * N
    total = 0j
    for w in product(range(c), repeat=form.rank):
        g = tuple(hrep[i] + N * w[i] for i in range(form.rank))
        num = a * form.q_value(g) + d * qq + form.bilinear(g, qrep)
        frac = Fraction(num, denom) % 1
        total += cexp(2j * pi * float(frac))
    return total


CATALOG = {
    "A2": ((2, -1), (-1, 2)),
    "A1A1": ((2, 0), (0, 2)),
    "2A2": ((4, -2), (-2, 4)),
    "D4": (
        (2, -1, 0, 0),
        (-1, 2, -1, -1),
        (0, -1, 2, 0),
        (0, -1, 0, 2),
    ),
    "E8": (
        (2, 0, -1, 0, 0, 0, 0, 0),
        (0, 2, 0, -1, 0, 0, 0, 0),
        (-1, 0, 2, -1, 0, 0, 0, 0),
        (0, -1, -1, 2, -1, 0, 0, 0),
        (0, 0, 0, -1, 2, -1, 0, 0),
        (0, 0, 0, 0, -1, 2, -1, 0),
        (0, 0, 0, 0, 0, -1, 2, -1),
        (0, 0, 0, 0, 0, 0, -1, 2),
    ),
}


def catalog_form(name: str) -> QuadraticForm:
    try:
        return QuadraticForm(CATALOG[name])
    except KeyError:
        raise ValueError(
            f"unknown form {name!r}; catalog has {', '.join(sorted(CATALOG))}"
        ) from None


def load_form(path) -> QuadraticForm:
    """Read {"gram": [[...], ...]} from a JSON file."""
    with open(path) as fh:
        data = json.load(fh)
    return QuadraticForm(data["gram"])
