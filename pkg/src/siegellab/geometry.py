"""Floating point geometry of the Siegel upper half space H_g and the
Siegel disk D_g.

Points are complex symmetric ``numpy`` arrays.  Every tolerance lives in
:class:`Tolerances`; pass a custom instance to tighten or relax checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, ConditioningError, DomainError


@dataclass(frozen=True)
class Tolerances:
    symmetry: float = 1e-12
    min_eig: float = 1e-10
    riemann: float = 1e-10
    cross_ratio: float = 1e-9
    roundtrip: float = 1e-10


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class TangentVector:
    base: np.ndarray
    dir: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", _sym(self.base))
        object.__setattr__(self, "dir", _sym(self.dir))


@dataclass(frozen=True)
class TorusCharIndex:
    A: tuple[int, ...]
    B: tuple[int, ...]

    def __post_init__(self):
        if len(self.A) != len(self.B):
            raise ArgumentError("A and B must have the same length")
        object.__setattr__(self, "A", tuple(int(a) for a in self.A))
        object.__setattr__(self, "B", tuple(int(b) for b in self.B))


def _sym(z, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    if z.shape[0] != z.shape[1]:
        raise ArgumentError("square matrix expected")
    if np.max(np.abs(z - z.T), initial=0.0) > tol.symmetry * max(1.0, np.max(np.abs(z))):
        raise ArgumentError("matrix is not symmetric")
    return z


def _imag_checked(omega, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    y = np.asarray(omega).imag
    y = (y + y.T) / 2
    if np.linalg.eigvalsh(y).min() <= tol.min_eig:
        raise ConditioningError("imaginary part is not safely positive definite")
    return y


def as_point(omega, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Coerce exact points (``SiegelPoint``) or arrays to a checked numpy point."""
    if hasattr(omega, "to_numpy"):
        omega = omega.to_numpy()
    z = _sym(omega, tol)
    _imag_checked(z, tol)
    return z


def _blocks(m):
    m = np.asarray(m, dtype=complex if np.iscomplexobj(m) else float)
    g = m.shape[0] // 2
    return m[:g, :g], m[:g, g:], m[g:, :g], m[g:, g:]


def act(m, omega) -> np.ndarray:
    """Numeric (A Omega + B)(C Omega + D)^-1.

    The imaginary part is taken from t(C conj(Omega) + D)^-1 Y (C Omega + D)^-1,
    which avoids the cancellation in Im of the quotient for symplectic M.
    """
    m = np.array(m, dtype=float)
    a, b, c, d = _blocks(m)
    omega = np.asarray(omega, dtype=complex)
    cd = c @ omega + d
    out = (a @ omega + b) @ np.linalg.inv(cd)
    g = omega.shape[0]
    jg = np.block([[np.zeros((g, g)), np.eye(g)], [-np.eye(g), np.zeros((g, g))]])
    if np.allclose(m.T @ jg @ m, jg, atol=1e-9):
        inv = np.linalg.inv(cd)
        y = np.conj(inv).T @ omega.imag @ inv
        y = (y + y.T).real / 2
        x = (out.real + out.real.T) / 2
        out = x + 1j * y
    return out


def metric_eval(v: TangentVector, w: TangentVector, tol: Tolerances = DEFAULT_TOL) -> complex:
    """sigma(Y^-1 dv Y^-1 conj(dw)) at the common base point."""
    if not np.allclose(v.base, w.base):
        raise ArgumentError("tangent vectors live at different base points")
    yinv = np.linalg.inv(_imag_checked(v.base, tol))
    return complex(np.trace(yinv @ v.dir @ yinv @ np.conj(w.dir)))


def pushforward(m, v: TangentVector) -> TangentVector:
    """Differential of the symplectic action at ``v.base``."""
    m = np.array(m, dtype=float)
    g = m.shape[0] // 2
    jg = np.block([[np.zeros((g, g)), np.eye(g)], [-np.eye(g), np.zeros((g, g))]])
    if not np.allclose(m.T @ jg @ m, jg, atol=1e-9):
        raise ArgumentError("pushforward needs a symplectic matrix (factor 1)")
    _, _, c, d = _blocks(m)
    cd = c @ v.base + d
    if abs(np.linalg.det(cd)) < 1e-14:
        raise ConditioningError("C*Omega + D is numerically singular")
    inv = np.linalg.inv(cd)
    new_dir = inv.T @ v.dir @ inv
    return TangentVector(act(m, v.base), (new_dir + new_dir.T) / 2)


def volume_density(omega) -> float:
    """(det Im Omega)^-(g+1)."""
    z = as_point(omega)
    g = z.shape[0]
    return float(np.linalg.det(z.imag) ** (-(g + 1)))


def in_disk(w, tol: Tolerances = DEFAULT_TOL) -> bool:
    w = np.asarray(w, dtype=complex)
    h = np.eye(w.shape[0]) - w @ np.conj(w)
    h = (h + np.conj(h.T)) / 2
    return bool(np.linalg.eigvalsh(h).min() > tol.min_eig)


def cayley(w, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """i (I + W)(I - W)^-1 from D_g to H_g."""
    w = _sym(w, tol)
    if not in_disk(w, tol):
        raise DomainError("W is not inside the Siegel disk")
    eye = np.eye(w.shape[0])
    z = 1j * (eye + w) @ np.linalg.inv(eye - w)
    return (z + z.T) / 2


def cayley_inv(omega, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """(Omega - iI)(Omega + iI)^-1 from H_g to D_g."""
    z = as_point(omega, tol)
    eye = np.eye(z.shape[0])
    w = (z - 1j * eye) @ np.linalg.inv(z + 1j * eye)
    return (w + w.T) / 2


def cayley_matrix(g: int) -> np.ndarray:
    """The 2g x 2g matrix T = (I I; iI -iI)/sqrt(2) realising the Cayley map."""
    eye = np.eye(g)
    return np.block([[eye, eye], [1j * eye, -1j * eye]]) / np.sqrt(2)


def disk_transform(m) -> np.ndarray:
    """M_* = T^-1 M T; for real symplectic M it has the shape (P Q; conj Q conj P)."""
    g = np.asarray(m).shape[0] // 2
    t = cayley_matrix(g)
    return np.linalg.inv(t) @ np.asarray(m, dtype=complex) @ t


def disk_act(h, w) -> np.ndarray:
    """(P W + Q)(conj(Q) W + conj(P))^-1 for h = (P Q; conj Q conj P)."""
    p, q, qb, pb = _blocks(np.asarray(h, dtype=complex))
    w = np.asarray(w, dtype=complex)
    return (p @ w + q) @ np.linalg.inv(qb @ w + pb)


def cross_ratio(omega1, omega0, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """R(Omega1, Omega0); generally not symmetric."""
    z1 = as_point(omega1, tol)
    z0 = as_point(omega0, tol)
    try:
        r = (
            (z1 - z0)
            @ np.linalg.inv(z1 - np.conj(z0))
            @ (np.conj(z1) - np.conj(z0))
            @ np.linalg.inv(np.conj(z1) - z0)
        )
    except np.linalg.LinAlgError as exc:
        raise ConditioningError("singular factor in the cross ratio") from exc
    return r


def cross_ratio_eigenvalues(omega1, omega0, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    ev = np.linalg.eigvals(cross_ratio(omega1, omega0, tol))
    if np.max(np.abs(ev.imag), initial=0.0) > tol.cross_ratio:
        raise ConditioningError("cross ratio has non-real eigenvalues")
    ev = ev.real
    if ev.min(initial=0.0) < -tol.cross_ratio or ev.max(initial=0.0) >= 1.0:
        raise ConditioningError("cross ratio eigenvalues left [0, 1)")
    return np.sort(np.clip(ev, 0.0, None))


def _normalized_spectrum(omega0, omega1, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """1 - r_k for the cross-ratio eigenvalues r_k, computed in a frame with Omega0 = iI.

    With Y0 = L tL the symplectic map Omega -> L^-1 (Omega - X0) tL^-1 sends
    Omega0 to iI and Omega1 to W.  There R = w conj(w) for w the Cayley image
    of W, and I - w w* = 4 (W + iI)^-* Im W (W + iI)^-1 is Hermitian, so the
    spectrum comes from eigvalsh without cancellation in 1 - r.
    """
    z0 = as_point(omega0, tol)
    z1 = as_point(omega1, tol)
    g = z0.shape[0]
    li = np.linalg.inv(np.linalg.cholesky(z0.imag))
    w = li @ (z1 - z0.real) @ li.T
    w = (w + w.T) / 2
    inv = np.linalg.inv(w + 1j * np.eye(g))
    e = 4 * np.conj(inv).T @ w.imag @ inv
    e = np.linalg.eigvalsh((e + np.conj(e.T)) / 2)
    if e.min() <= 0 or e.max() > 1 + tol.cross_ratio:
        raise ConditioningError("normalized spectrum left (0, 1]")
    return np.clip(e, None, 1.0)


def geodesic_distance(omega0, omega1, tol: Tolerances = DEFAULT_TOL) -> float:
    """Symplectic-invariant distance from the spectrum of the cross ratio.

    Uses r_k = 1 - e_k from :func:`_normalized_spectrum`; the summand
    log((1 + sqrt r)/(1 - sqrt r)) is evaluated as 2 log(1 + sqrt r) - log e.
    """
    e = _normalized_spectrum(omega0, omega1, tol)
    s = np.sqrt(1.0 - e)
    return float(np.sqrt(np.sum((2 * np.log1p(s) - np.log(e)) ** 2)))


def invariant_poly(j: int, z) -> float:
    """q_j(Z) = tr((Z conj Z)^j)."""
    z = _sym(z)
    g = z.shape[0]
    if not 1 <= j <= g:
        raise ArgumentError(f"j must lie in 1..{g}")
    val = np.trace(np.linalg.matrix_power(z @ np.conj(z), j))
    return float(val.real)


def riemann_conditions(omega, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Check both Riemann conditions for the period matrix (I, Omega)."""
    z = np.atleast_2d(np.asarray(omega, dtype=complex))
    g = z.shape[0]
    period = np.hstack([np.eye(g), z])
    jg = np.block([[np.zeros((g, g)), np.eye(g)], [-np.eye(g), np.zeros((g, g))]])
    rc1 = period @ jg @ period.T
    if np.max(np.abs(rc1)) > tol.riemann:
        return False
    h = -(1 / 1j) * (period @ jg @ np.conj(period).T)
    h = (h + np.conj(h.T)) / 2
    return bool(np.linalg.eigvalsh(h).min() > tol.riemann)


def torus_char(omega, idx: TorusCharIndex, z) -> complex:
    """E_{Omega;A,B}(Z) for Z = U + iV."""
    omega = as_point(omega)
    x, y = omega.real, omega.imag
    a = np.array(idx.A, dtype=float)
    b = np.array(idx.B, dtype=float)
    z = np.asarray(z, dtype=complex)
    u, v = z.real, z.imag
    phase = a @ u + (b - a @ x) @ np.linalg.inv(y) @ v
    return complex(np.exp(2j * np.pi * phase))


def torus_inner_product(omega, idx1: TorusCharIndex, idx2: TorusCharIndex, grid_n: int = 64,
                        allow_g2: bool = False) -> complex:
    """Normalised L2 pairing of two characters over the torus C^g / (Z^g + Z^g Omega).

    The cell is parametrised as Z = s + t Omega with s, t in [0, 1)^g, and
    the periodic trapezoid rule uses ``grid_n`` nodes per real direction.
    Genus 2 costs grid_n**4 evaluations and needs ``allow_g2``.
    """
    if grid_n < 4:
        raise ArgumentError("grid_n must be at least 4")
    omega = as_point(omega)
    g = omega.shape[0]
    if g > 2 or (g == 2 and not allow_g2):
        raise ArgumentError("quadrature is limited to g = 1 (g = 2 with allow_g2)")
    x, y = omega.real, omega.imag
    nodes = np.arange(grid_n) / grid_n
    mesh = np.meshgrid(*([nodes] * (2 * g)), indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    s, t = pts[:, :g], pts[:, g:]
    zs = s + t @ omega
    u, v = zs.real, zs.imag
    yinv = np.linalg.inv(y)

    def values(idx):
        a = np.array(idx.A, dtype=float)
        b = np.array(idx.B, dtype=float)
        return np.exp(2j * np.pi * (u @ a + v @ yinv @ (b - a @ x)))

    # fixed-order summation keeps the result reproducible
    return complex(np.sum(values(idx1) * np.conj(values(idx2))) / len(pts))
