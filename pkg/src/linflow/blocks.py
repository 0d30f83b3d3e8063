"""Exact data model for linear flows in real block normal form.

A generator is a finite multiset of real Jordan blocks.  Each block has a
size m >= 1, a rational growth rate ``re`` and a rational rotation rate
``im >= 0``.  A block with im == 0 acts on R^m (growth plus nilpotent
shift); a block with im > 0 couples the same data with a rotation and acts
on R^(2m).  Two generators are similar exactly when their block multisets
agree, which is why the multiset is the canonical object everywhere in this
package.

The JSON wire format is::

    {"blocks": [{"m": 2, "re": "-1/2", "im": 1}, ...]}

for generators, and ``{"dim": d, "rows": [[...], ...]}`` with rational
entries for matrices.  Rationals are integers or "p/q" strings.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _ratlinalg as rl
from .errors import (
    ClusterAmbiguity,
    PreconditionViolated,
    SnapFailure,
    SpecParseError,
)

__all__ = [
    "JordanBlock",
    "GeneratorSpec",
    "RationalMatrix",
    "ApproxSpec",
    "parse_rational",
    "rational_to_json",
    "parse_spec",
    "serialize_spec",
    "parse_matrix",
    "serialize_matrix",
    "scale_spec",
    "time_reverse",
    "realify",
    "materialize",
    "spec_from_matrix",
]


# ---------------------------------------------------------------------------
# rationals on the wire


def parse_rational(value, where="value"):
    """Accept an int or a 'p/q' / 'n' string; reject everything else."""
    if isinstance(value, bool):
        raise SpecParseError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecParseError(f"{where}: malformed rational {value!r}") from exc
    raise SpecParseError(
        f"{where}: expected an integer or 'p/q' string, got {type(value).__name__}"
    )


def rational_to_json(q):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _no_duplicate_keys(pairs):
    seen = set()
    for key, _ in pairs:
        if key in seen:
            raise SpecParseError(f"duplicate JSON key {key!r}")
        seen.add(key)
    return dict(pairs)


def _load_json(text, what):
    try:
        return json.loads(text, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{what}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


# ---------------------------------------------------------------------------
# core types


@dataclass(frozen=True)
class JordanBlock:
    """One real Jordan block: size, growth rate, rotation rate (>= 0).

    A negative rotation rate is the same block in the mirrored orientation,
    so it is normalized away at construction.
    """

    size: int
    re: Fraction
    im: Fraction

    def __post_init__(self):
        if isinstance(self.size, bool) or not isinstance(self.size, int):
            raise SpecParseError("block size must be an integer")
        if self.size < 1:
            raise SpecParseError(f"block size must be >= 1, got {self.size}")
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", abs(Fraction(self.im)))

    @property
    def dim(self):
        """Real dimension the block acts on: m if im == 0 else 2m."""
        return self.size if self.im == 0 else 2 * self.size

    def sort_key(self):
        return (self.re, self.im, self.size)


@dataclass(frozen=True)
class GeneratorSpec:
    """Canonically ordered multiset of blocks; equality is similarity."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(sorted(self.blocks, key=JordanBlock.sort_key))
        for b in blocks:
            if not isinstance(b, JordanBlock):
                raise SpecParseError("GeneratorSpec takes JordanBlock entries")
        object.__setattr__(self, "blocks", blocks)

    @property
    def dim(self):
        return sum(b.dim for b in self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self):
        return len(self.blocks)


@dataclass(frozen=True)
class RationalMatrix:
    """Dense square matrix with Fraction entries."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.rows)
        d = len(rows)
        for row in rows:
            if len(row) != d:
                raise SpecParseError(
                    f"matrix must be square: got a row of length {len(row)} in a {d}-row matrix"
                )
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self):
        return len(self.rows)

    def to_float(self):
        return np.array([[float(x) for x in row] for row in self.rows], dtype=float)

    def fingerprint(self):
        payload = json.dumps(serialize_matrix(self), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ApproxSpec:
    """A generator recovered from a matrix, with its certification data.

    ``residual`` is the largest distance between a computed eigenvalue and
    the rational it was snapped to; it is guaranteed <= ``tol``.  ``exact``
    records whether the rational spectrum was certified by exact polynomial
    division (True) or only numerically (False).
    """

    spec: GeneratorSpec
    residual: float
    tol: float
    source: str
    exact: bool

    @property
    def dim(self):
        return self.spec.dim


# ---------------------------------------------------------------------------
# parse / serialize


def _parse_block_obj(obj, where):
    if not isinstance(obj, dict):
        raise SpecParseError(f"{where}: block must be an object")
    extra = set(obj) - {"m", "re", "im"}
    if extra:
        raise SpecParseError(f"{where}: unknown field(s) {sorted(extra)}")
    missing = {"m", "re", "im"} - set(obj)
    if missing:
        raise SpecParseError(f"{where}: missing field(s) {sorted(missing)}")
    m = obj["m"]
    if isinstance(m, bool) or not isinstance(m, int):
        raise SpecParseError(f"{where}.m: block size must be an integer")
    if m < 1:
        raise SpecParseError(f"{where}.m: block size must be >= 1, got {m}")
    return JordanBlock(
        size=m,
        re=parse_rational(obj["re"], f"{where}.re"),
        im=parse_rational(obj["im"], f"{where}.im"),
    )


def parse_spec(source):
    """Parse a generator from JSON text or an already-decoded dict."""
    if isinstance(source, (str, bytes)):
        source = _load_json(source, "generator")
    if not isinstance(source, dict):
        raise SpecParseError("generator: top level must be an object")
    extra = set(source) - {"blocks"}
    if extra:
        raise SpecParseError(f"generator: unknown field(s) {sorted(extra)}")
    if "blocks" not in source:
        raise SpecParseError("generator: missing 'blocks'")
    blocks = source["blocks"]
    if not isinstance(blocks, list):
        raise SpecParseError("generator.blocks: must be a list")
    parsed = [
        _parse_block_obj(b, f"generator.blocks[{i}]") for i, b in enumerate(blocks)
    ]
    return GeneratorSpec(tuple(parsed))


def serialize_spec(spec):
    return {
        "blocks": [
            {"m": b.size, "re": rational_to_json(b.re), "im": rational_to_json(b.im)}
            for b in spec.blocks
        ]
    }


def parse_matrix(source):
    """Parse a rational matrix from JSON text or a decoded dict."""
    if isinstance(source, (str, bytes)):
        source = _load_json(source, "matrix")
    if not isinstance(source, dict):
        raise SpecParseError("matrix: top level must be an object")
    extra = set(source) - {"dim", "rows"}
    if extra:
        raise SpecParseError(f"matrix: unknown field(s) {sorted(extra)}")
    for key in ("dim", "rows"):
        if key not in source:
            raise SpecParseError(f"matrix: missing '{key}'")
    d = source["dim"]
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise SpecParseError("matrix.dim: must be a positive integer")
    rows = source["rows"]
    if not isinstance(rows, list) or len(rows) != d:
        raise SpecParseError(f"matrix.rows: expected {d} rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise SpecParseError(f"matrix.rows[{i}]: expected {d} entries")
        out.append(
            tuple(parse_rational(x, f"matrix.rows[{i}][{j}]") for j, x in enumerate(row))
        )
    return RationalMatrix(tuple(out))


def serialize_matrix(matrix):
    return {
        "dim": matrix.dim,
        "rows": [[rational_to_json(x) for x in row] for row in matrix.rows],
    }


# ---------------------------------------------------------------------------
# multiset operations


def scale_spec(spec, alpha):
    """Blocks of alpha * A: (m, re, im) -> (m, alpha*re, |alpha|*im).

    Speeding a flow up by alpha scales growth rates by alpha and rotation
    rates by |alpha| (a negative alpha also reverses orientation, which the
    normalized im absorbs).
    """
    alpha = Fraction(alpha)
    if alpha == 0:
        raise PreconditionViolated("scaling factor must be nonzero")
    return GeneratorSpec(
        tuple(
            JordanBlock(b.size, alpha * b.re, abs(alpha) * b.im) for b in spec.blocks
        )
    )


def time_reverse(spec):
    """Blocks of -A, the generator of the time-reversed flow."""
    return scale_spec(spec, -1)


def realify(blocks):
    """Real block multiset of a complex-diagonal generator.

    Input blocks are (size, re, im) triples over C (im of either sign).  A
    complex pair im != 0 contributes one real block of twice the dimension;
    a real eigenvalue im == 0 appears once per complex block, i.e. twice in
    the real form of the pair (the input lists each complex block once, so a
    real one maps to two copies).
    """
    out = []
    for blk in blocks:
        if isinstance(blk, JordanBlock):
            m, re, im = blk.size, blk.re, blk.im
        else:
            m, re, im = blk
        m = int(m)
        re = Fraction(re)
        im = Fraction(im)
        if im == 0:
            out.append(JordanBlock(m, re, 0))
            out.append(JordanBlock(m, re, 0))
        else:
            out.append(JordanBlock(m, re, abs(im)))
    return GeneratorSpec(tuple(out))


def materialize(spec):
    """Exact block-diagonal matrix for a generator.

    A size-m block with im == 0 is the usual Jordan block: re on the
    diagonal, ones on the superdiagonal.  With im = b > 0 the block is the
    2m x 2m matrix [[J, -b I], [b I, J]] acting on R^m x R^m.
    """
    d = spec.dim
    zero = Fraction(0)
    rows = [[zero] * d for _ in range(d)]
    off = 0
    for b in spec.blocks:
        m = b.size
        if b.im == 0:
            for i in range(m):
                rows[off + i][off + i] = b.re
                if i + 1 < m:
                    rows[off + i][off + i + 1] = Fraction(1)
            off += m
        else:
            for i in range(m):
                rows[off + i][off + i] = b.re
                rows[off + m + i][off + m + i] = b.re
                if i + 1 < m:
                    rows[off + i][off + i + 1] = Fraction(1)
                    rows[off + m + i][off + m + i + 1] = Fraction(1)
                rows[off + i][off + m + i] = -b.im
                rows[off + m + i][off + i] = b.im
            off += 2 * m
    return RationalMatrix(tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# matrix -> spec ingestion
#
# Exact tier: rational characteristic polynomial, square-free float rooting
# with Newton polish, limit_denominator snap, certification by exact
# divisibility, and block sizes from exact rank sequences over Q(i).  If the
# spectrum is not exactly rational at the denominator bound, a numeric tier
# clusters float eigenvalues and measures ranks by SVD; either tier aborts
# with SnapFailure / ClusterAmbiguity rather than guess.


def _float_roots_squarefree(chi):
    sf = rl.poly_squarefree(chi)
    coeffs = [float(c) for c in sf]  # lowest degree first
    roots = np.roots(list(reversed(coeffs)))
    dsf = rl.poly_deriv(sf)
    polished = []
    for z in roots:
        z = complex(z)
        for _ in range(4):
            dz = rl.poly_eval_complex(dsf, z)
            if dz == 0:
                break
            z = z - rl.poly_eval_complex(sf, z) / dz
        polished.append(z)
    return polished


def _snap(x, max_denominator):
    return Fraction(x).limit_denominator(max_denominator)


def _exact_tier(matrix, chi, tol, max_denominator):
    """Return (eigs, residual) or None; eigs maps (re, im>=0) -> multiplicity."""
    roots = _float_roots_squarefree(chi)
    # candidate rational eigenvalues, conjugates identified
    cands = []
    for z in roots:
        re_hat = _snap(z.real, max_denominator)
        im_hat = _snap(abs(z.imag), max_denominator)
        if abs(complex(z.real, abs(z.imag)) - complex(re_hat, im_hat)) > tol:
            return None
        pair = (re_hat, im_hat)
        if pair not in cands:
            cands.append(pair)
    remaining = chi
    eigs = {}
    for re_hat, im_hat in cands:
        if im_hat == 0:
            factor = [-re_hat, Fraction(1)]
        else:
            factor = [re_hat * re_hat + im_hat * im_hat, -2 * re_hat, Fraction(1)]
        mult = 0
        while True:
            q, r = rl.poly_divmod(remaining, factor)
            if r != [Fraction(0)]:
                break
            remaining = q
            mult += 1
        if mult == 0:
            return None
        eigs[(re_hat, im_hat)] = mult
    if rl.poly_deg(remaining) != 0:
        return None
    # residual: distance from every float root to its claimed rational
    residual = 0.0
    for z in roots:
        zc = complex(z.real, abs(z.imag))
        best = min(
            abs(zc - complex(re_hat, im_hat)) for re_hat, im_hat in eigs
        )
        residual = max(residual, best)
    return eigs, residual


def _check_cluster_separation(eigs, tol):
    pts = [complex(re, im) for re, im in eigs]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) < 2 * tol:
                raise ClusterAmbiguity(
                    f"eigenvalues {pts[i]} and {pts[j]} are closer than twice tol={tol}"
                )


def _sizes_from_ranks(ranks, total):
    """Block size counts from the rank sequence of powers.

    ranks[k] = rank((A - z)^k); blocks of size >= k number ranks[k-1] - ranks[k].
    """
    geq = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes = []
    for k in range(1, len(geq) + 1):
        count = geq[k - 1] - (geq[k] if k < len(geq) else 0)
        if count < 0:
            return None
        sizes.extend([k] * count)
    if sum(sizes) != total:
        return None
    return sizes


def _exact_structure(matrix, eigs):
    blocks = []
    for (re_hat, im_hat), mult in eigs.items():
        ranks = rl.rank_sequence(matrix.rows, re_hat, im_hat, mult)
        sizes = _sizes_from_ranks(ranks, mult)
        if sizes is None:
            raise SnapFailure(
                f"inconsistent rank sequence at eigenvalue ({re_hat}, {im_hat})"
            )
        for m in sizes:
            if im_hat == 0:
                blocks.append(JordanBlock(m, re_hat, 0))
            else:
                blocks.append(JordanBlock(m, re_hat, im_hat))
    spec = GeneratorSpec(tuple(blocks))
    return spec


def _numeric_tier(matrix, tol, max_denominator):
    Mf = matrix.to_float()
    d = matrix.dim
    eigs = np.linalg.eigvals(Mf)
    pts = [complex(z.real, abs(z.imag)) for z in eigs]
    # greedy union clustering at distance tol
    clusters = []
    for z in pts:
        for cl in clusters:
            if any(abs(z - w) <= tol for w in cl):
                cl.append(z)
                break
        else:
            clusters.append([z])
    centers = [sum(cl) / len(cl) for cl in clusters]
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            if abs(centers[i] - centers[j]) < 2 * tol:
                raise ClusterAmbiguity(
                    f"eigenvalue clusters at {centers[i]:.3e} and {centers[j]:.3e} "
                    f"are closer than twice tol={tol}"
                )
    residual = 0.0
    parsed = {}
    for cl, z in zip(clusters, centers):
        re_hat = _snap(z.real, max_denominator)
        im_hat = _snap(z.imag, max_denominator)
        if im_hat < 0:
            im_hat = -im_hat
        snapped = complex(re_hat, im_hat)
        err = max(abs(w - snapped) for w in cl)
        if err > tol:
            raise SnapFailure(
                f"no rational with denominator <= {max_denominator} within "
                f"tol={tol} of eigenvalue {z:.12g} (best miss {err:.3e})"
            )
        residual = max(residual, err)
        key = (re_hat, im_hat)
        parsed[key] = parsed.get(key, 0) + len(cl)
    # fold: eigenvalues with im>0 were counted once per conjugate pair member?
    # pts kept both conjugates mapped to the upper half plane, so counts are
    # total algebraic multiplicities over C for im=0 and 2x the pair count for
    # im>0; normalize the latter.
    total = 0
    for (re_hat, im_hat), mult in list(parsed.items()):
        if im_hat > 0:
            if mult % 2:
                raise SnapFailure(
                    f"odd conjugate count at eigenvalue ({re_hat}, {im_hat})"
                )
            parsed[(re_hat, im_hat)] = mult // 2
            total += mult
        else:
            total += mult
    if total != d:
        raise SnapFailure("eigenvalue multiplicities do not sum to the dimension")
    blocks = []
    for (re_hat, im_hat), mult in parsed.items():
        z = complex(re_hat, im_hat)
        P = np.eye(d, dtype=complex)
        S = Mf.astype(complex) - z * np.eye(d)
        ranks = [d]
        for _ in range(mult):
            P = P @ S
            sv = np.linalg.svd(P, compute_uv=False)
            thresh = tol * max(1.0, sv[0] if len(sv) else 0.0)
            ranks.append(int(np.sum(sv > thresh)))
        sizes = _sizes_from_ranks(ranks, mult)
        if sizes is None:
            raise SnapFailure(
                f"inconsistent numeric rank sequence at eigenvalue ({re_hat}, {im_hat})"
            )
        for m in sizes:
            blocks.append(JordanBlock(m, re_hat, im_hat))
    return GeneratorSpec(tuple(blocks)), residual


def spec_from_matrix(matrix, tol=1e-9, max_denominator=1024):
    """Recover the block multiset of a rational matrix, with certification.

    Tries the exact route first (rational characteristic polynomial,
    certified rational eigenvalues, exact rank sequences); falls back to a
    numeric route for matrices whose spectrum is only approximately rational
    at the denominator bound.  Raises SnapFailure or ClusterAmbiguity rather
    than return a guess.
    """
    assert tol > 0 and max_denominator >= 1
    chi = rl.charpoly(matrix.rows)
    exact = _exact_tier(matrix, chi, tol, max_denominator)
    if exact is not None:
        eigs, residual = exact
        _check_cluster_separation(eigs, tol)
        spec = _exact_structure(matrix, eigs)
        return ApproxSpec(
            spec=spec,
            residual=float(residual),
            tol=float(tol),
            source=matrix.fingerprint(),
            exact=True,
        )
    spec, residual = _numeric_tier(matrix, tol, max_denominator)
    return ApproxSpec(
        spec=spec,
        residual=float(residual),
        tol=float(tol),
        source=matrix.fingerprint(),
        exact=False,
    )
