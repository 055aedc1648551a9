"""Joint spectral decomposition of harmonic polynomials on H^n.

The spaces H_{h,m} (harmonic, homogeneous of degree h, Gamma-eigenvalue
(h-2m)(h-2m+2)) are built by brute force as exact kernels, and compared with
the closed-form dimensions and eigenvalues.

Elimination is split into "sectors": the monomial basis is graded by the
parity of the degree in each quaternion block, the parity of the total
(c, d)-degree and the parity of the total (b, d)-degree.  The Laplacian,
Gamma and multiplication by |x|^2 preserve all three gradings, and monomials
from distinct sectors are orthogonal in L^2 of the sphere, so every kernel
and every Gram matrix is block diagonal along sectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from . import linalg
from .poly import (
    Poly,
    check_budget,
    gamma_op,
    laplace_nonneg,
    ladder,
    monomials,
    sphere_pairing,
    vector_field_T,
)
from .quat import SpherePoint, base_point
from .rational import ComplexRational, ONE, ZERO, I_UNIT


@dataclass(frozen=True, order=True)
class SpectralIndex:
    h: int
    m: int

    def __post_init__(self):
        if self.h < 0 or self.m < 0 or 2 * self.m > self.h:
            raise ValueError(f"({self.h}, {self.m}) is not in I_Q = {{2m <= h}}")


@dataclass(frozen=True)
class EigenData:
    lam_delta: int
    lam_gamma: int
    lam_L: int
    dim: int


@dataclass
class HarmonicSpaceBasis:
    n: int
    index: SpectralIndex
    basis: list
    sectors: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)


def index_set(h_max: int):
    """I_Q restricted to h <= h_max, ordered by (h, m)."""
    return [SpectralIndex(h, m) for h in range(h_max + 1) for m in range(h // 2 + 1)]


def _check_index(h: int, m: int) -> None:
    SpectralIndex(h, m)


def dim_P_h(n: int, h: int) -> int:
    return comb(h + 4 * n - 1, 4 * n - 1) if h >= 0 else 0


def dim_H_h(n: int, h: int) -> int:
    return dim_P_h(n, h) - dim_P_h(n, h - 2)


def dim_H_hm(n: int, h: int, m: int) -> int:
    _check_index(h, m)
    num = (h - 2 * m + 1) ** 2 * (h + 2 * n - 1) * comb(h - m + 2 * n - 2, 2 * n - 3) * comb(
        m + 2 * n - 3, 2 * n - 3
    )
    den = (2 * n - 2) * (2 * n - 1)
    if num % den:
        raise ArithmeticError("dimension formula produced a non-integer")
    return num // den


def lambda_L(n: int, h: int, m: int) -> int:
    return 4 * m * (h - m + 1) + 4 * (n - 1) * h


def eigenvalues(n: int, h: int, m: int) -> EigenData:
    _check_index(h, m)
    lam_d = h * (h + 4 * n - 2)
    lam_g = (h - 2 * m) * (h - 2 * m + 2)
    return EigenData(lam_d, lam_g, lam_d - lam_g, dim_H_hm(n, h, m))


def dims_rows(n: int, h_max: int) -> list:
    """Rows (h, m, dim, lam_delta, lam_gamma, lam_L) over I_Q with h <= h_max."""
    out = []
    for idx in index_set(h_max):
        ed = eigenvalues(n, idx.h, idx.m)
        out.append((idx.h, idx.m, ed.dim, ed.lam_delta, ed.lam_gamma, ed.lam_L))
    return out


# ---------------------------------------------------------------------------
# sectors and operator matrices


def sector_key(exp: tuple) -> tuple:
    blocks = tuple(sum(exp[q:q + 4]) & 1 for q in range(0, len(exp), 4))
    cd = sum(exp[q + 2] + exp[q + 3] for q in range(0, len(exp), 4)) & 1
    bd = sum(exp[q + 1] + exp[q + 3] for q in range(0, len(exp), 4)) & 1
    return blocks + (cd, bd)


def sectors(n: int, h: int) -> dict:
    """Monomials of degree h grouped by sector key (keys and members sorted)."""
    out: dict = {}
    for e in monomials(n, h):
        out.setdefault(sector_key(e), []).append(e)
    return dict(sorted(out.items()))


def _operator_rows(op, n: int, cols: list, shift=0) -> list:
    """Sparse integer rows of ``op - shift`` acting on the monomials ``cols``."""
    rows: dict = {}
    for j, e in enumerate(cols):
        img = op(Poly.monomial(n, e))
        if shift:
            img = img - Poly.monomial(n, e, shift)
        for te, c in img.terms.items():
            if c.im or c.re.denominator != 1:
                raise ValueError("operator matrix is not integral")
            rows.setdefault(te, {})[j] = int(c.re)
    return [rows[k] for k in sorted(rows)]


def _kernel_polys(n: int, cols: list, vecs: list) -> list:
    return [Poly._raw(n, {cols[c]: ComplexRational(v) for c, v in vec.items()}) for vec in vecs]


def harmonic_space(n: int, h: int) -> list:
    """Exact basis of H_h = ker(Laplacian) in P_h."""
    check_budget(dim_P_h(n, h), "harmonic_space")
    out = []
    for cols in sectors(n, h).values():
        rows = _operator_rows(laplace_nonneg, n, cols)
        out.extend(_kernel_polys(n, cols, linalg.nullspace_integer(rows, len(cols))))
    expected = dim_H_h(n, h)
    if len(out) != expected:
        raise RuntimeError(f"dim H_{h} = {len(out)}, expected {expected}")
    return out


@lru_cache(maxsize=64)
def _joint_eigenspace(n: int, h: int, m: int):
    lam = eigenvalues(n, h, m).lam_gamma
    basis, labels = [], []
    for key, cols in sectors(n, h).items():
        rows = _operator_rows(laplace_nonneg, n, cols) + _operator_rows(gamma_op, n, cols, lam)
        polys = _kernel_polys(n, cols, linalg.nullspace_integer(rows, len(cols)))
        basis.extend(polys)
        labels.extend([key] * len(polys))
    return tuple(basis), tuple(labels)


def joint_eigenspace(n: int, h: int, m: int, check: bool = True) -> HarmonicSpaceBasis:
    """Exact basis of H_{h,m}: harmonic and Gamma-eigenvalue (h-2m)(h-2m+2).

    With ``check`` (default) a dimension different from the closed form raises
    ``RuntimeError``.
    """
    _check_index(h, m)
    check_budget(dim_P_h(n, h), "joint_eigenspace")
    basis, labels = _joint_eigenspace(n, h, m)
    if check and len(basis) != dim_H_hm(n, h, m):
        raise RuntimeError(f"dim H_{{{h},{m}}} = {len(basis)}, expected {dim_H_hm(n, h, m)}")
    return HarmonicSpaceBasis(n, SpectralIndex(h, m), list(basis), list(labels))


# ---------------------------------------------------------------------------
# complex bidegrees


def complex_coordinates(n: int) -> list:
    """z_{2q} = a_q + i b_q and z_{2q+1} = c_q + i d_q, as polynomials."""
    zs = []
    for q in range(n):
        for re_i, im_i in ((4 * q, 4 * q + 1), (4 * q + 2, 4 * q + 3)):
            zs.append(Poly.var(n, re_i) + Poly.var(n, im_i) * I_UNIT)
    return zs


def bidegree_space(n: int, p: int, q: int) -> list:
    """Monomials z^alpha conj(z)^beta with |alpha| = p, |beta| = q."""
    if p < 0 or q < 0:
        raise ValueError("bidegree must be nonnegative")
    count = comb(p + 2 * n - 1, 2 * n - 1) * comb(q + 2 * n - 1, 2 * n - 1)
    check_budget(count, "bidegree_space")
    zs = complex_coordinates(n)
    zbars = [z.conj() for z in zs]

    def mono_powers(vars_, deg):
        out = []
        for e in monomials_complex(len(vars_), deg):
            acc = Poly.const(n)
            for v, k in zip(vars_, e):
                if k:
                    acc = acc * v ** k
            out.append(acc)
        return out

    holo = mono_powers(zs, p)
    anti = mono_powers(zbars, q)
    return [a * b for a in holo for b in anti]


def monomials_complex(nvars: int, deg: int) -> list:
    from itertools import combinations_with_replacement

    out = []
    for combo in combinations_with_replacement(range(nvars), deg):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out)


# ---------------------------------------------------------------------------
# su(2) string structure


@dataclass
class StringReport:
    dim: int
    gamma_dims: dict  # l -> dim of the Gamma-eigenspace with eigenvalue l(l+2)
    d0_dims: dict  # k -> dim of the d0-eigenspace with eigenvalue k
    bijective: bool
    dim_identity: bool

    @property
    def ok(self) -> bool:
        return self.bijective and self.dim_identity and sum(self.gamma_dims.values()) == self.dim


def _coordinate_system(space: list):
    """Echelon basis of span(space) over the union of monomials."""
    n = space[0].n
    mons = sorted({e for p in space for e in p.terms})
    pos = {e: i for i, e in enumerate(mons)}
    rows = []
    for p in space:
        row = [ZERO] * len(mons)
        for e, c in p.terms.items():
            row[pos[e]] = c
        rows.append(row)
    red, piv = linalg.rref(rows, len(mons))
    return n, mons, pos, red, piv


def _coords(p: Poly, pos, red, piv):
    """Coordinates of p in the echelon basis, or None if p is not in the span."""
    vec = [ZERO] * len(pos)
    for e, c in p.terms.items():
        i = pos.get(e)
        if i is None:
            return None
        vec[i] = c
    co = [vec[c] for c in piv]
    recon = [ZERO] * len(pos)
    for a, row in zip(co, red):
        if a:
            recon = [x + a * y for x, y in zip(recon, row)]
    return co if recon == vec else None


def _restricted_matrix(op, n, mons, pos, red, piv):
    cols = []
    for row in red:
        p = Poly._raw(n, {mons[i]: c for i, c in enumerate(row) if c})
        co = _coords(op(p), pos, red, piv)
        if co is None:
            raise ValueError("space is not invariant under the vector fields")
        cols.append(co)
    r = len(red)
    return [[cols[j][i] for j in range(r)] for i in range(r)]  # matrix acting on coordinates


def _shifted(mat, lam):
    return [[v - lam if i == j else v for j, v in enumerate(row)] for i, row in enumerate(mat)]


def _apply(mat, vec):
    return [sum((a * b for a, b in zip(row, vec)), ZERO) for row in mat]


def su2_string_check(space: list) -> StringReport:
    """Check the su(2) string structure of a {T_i, T_j, T_k}-invariant space.

    Inside each Gamma-eigenspace (eigenvalue l(l+2)), the raising operator d+
    must map the d0-eigenspace k bijectively onto k + 2 for k = -l, ..., l - 2
    (and d- back), and dim E_Gamma(l(l+2)) = (l+1)(dim E_d0(l) - dim E_d0(l+2)).
    """
    space = [p for p in space if p]
    if not space:
        return StringReport(0, {}, {}, True, True)
    n, mons, pos, red, piv = _coordinate_system(space)
    for u in "ijk":
        _restricted_matrix(lambda p, u=u: vector_field_T(u, p), n, mons, pos, red, piv)
    g = _restricted_matrix(gamma_op, n, mons, pos, red, piv)
    d0 = _restricted_matrix(lambda p: ladder("0", p), n, mons, pos, red, piv)
    dp = _restricted_matrix(lambda p: ladder("+", p), n, mons, pos, red, piv)
    dm = _restricted_matrix(lambda p: ladder("-", p), n, mons, pos, red, piv)
    r = len(red)
    lmax = max(p.degree() for p in space)

    def kernel(*mats):
        rows = [row for mat in mats for row in mat]
        return linalg.nullspace(rows, r, one=ONE)

    d0_dims = {k: len(kernel(_shifted(d0, k))) for k in range(-lmax - 2, lmax + 3)}
    gamma_dims, bijective = {}, True
    for ell in range(lmax + 1):
        lam = ell * (ell + 2)
        gsh = _shifted(g, lam)
        gamma_dims[ell] = len(kernel(gsh))
        if not gamma_dims[ell]:
            continue
        weight = {k: kernel(gsh, _shifted(d0, k)) for k in range(-ell, ell + 1, 2)}
        sizes = {len(v) for v in weight.values()}
        if len(sizes) != 1 or sum(len(v) for v in weight.values()) != gamma_dims[ell]:
            bijective = False
        for k in range(-ell, ell, 2):
            up = [_apply(dp, v) for v in weight[k]]
            down = [_apply(dm, v) for v in weight[k + 2]]
            if linalg.rank(up) != len(weight[k + 2]) or linalg.rank(down) != len(weight[k]):
                bijective = False
    dim_identity = all(
        gamma_dims[ell] == (ell + 1) * (d0_dims[ell] - d0_dims[ell + 2]) for ell in gamma_dims
    )
    return StringReport(r, gamma_dims, d0_dims, bijective, dim_identity)


# ---------------------------------------------------------------------------
# brute-force projection kernel


def projection_kernel_bruteforce(
    n: int, h: int, m: int, e: SpherePoint | None = None, basis=None, by_sector: bool = True
) -> Poly:
    """K(x, e) for the orthogonal projection onto H_{h,m}, from any exact basis.

    K(x, e) = sum_a y_a psi_a(x) where G^T y = conj(psi(e)) and
    G_ab = integral of psi_a conj(psi_b).  With ``by_sector`` the Gram matrix
    is assembled per sector (it is block diagonal along sectors) and blocks
    with psi(e) = 0 are skipped; pass ``by_sector=False`` to use one full
    Gram matrix, e.g. for a basis that mixes sectors.
    """
    if e is None:
        e = base_point(n)
    if not e.exact:
        raise TypeError("projection kernel oracle needs an exact base point")
    if basis is None:
        space = joint_eigenspace(n, h, m)
        basis, labels = space.basis, space.sectors
    else:
        labels = [None] * len(basis)
        by_sector = False
    if not by_sector:
        labels = [0] * len(basis)
    evals = [p.eval_exact(e).conj() for p in basis]
    groups: dict = {}
    for i, lab in enumerate(labels):
        groups.setdefault(lab, []).append(i)
    kernel = Poly.zero(n)
    for idx in groups.values():
        rhs = [evals[i] for i in idx]
        if not any(rhs):
            continue
        gram_t = [[sphere_pairing(basis[b], basis[a]) for b in idx] for a in idx]
        # gram_t[a][b] = G_ba, i.e. the transpose of G
        y = linalg.solve(gram_t, rhs)
        for i, ya in zip(idx, y):
            if ya:
                kernel = kernel + basis[i] * ya
    return kernel
