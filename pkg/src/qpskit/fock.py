"""Free scalar field on a 1D periodic lattice with a total-number-truncated
Fock space.

Classical phase space: pairs (f, g) of real lattice functions, symplectic
form Omega((f,g),(f',g')) = sum_x (f g' - f' g), spacing 1. The dispersion
is omega = sqrt(-laplacian + m^2) with the nearest-neighbor difference, so
omega_k = sqrt(4 sin^2(pi k / Ns) + m^2) on Fourier modes. The complex
structure J(f,g) = (-omega^-1 g, omega f) and 1-particle map

    K(f, g) = (omega^(1/2) f + i omega^(-1/2) g) / sqrt(2 hbar)

satisfy K(Jz) = i K(z), embedding phase space into the 1-particle space.

The Fock space keeps occupation vectors of the Ns Fourier modes with total
particle number <= nmax; identities that close below the cutoff hold
exactly (the "safe subspace"), so every check here is exact up to float
roundoff rather than a truncation approximation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np


class FockConfigError(ValueError):
    pass


@dataclass
class PhasePoint:
    """Classical field/momentum configuration pair."""

    f: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        self.f = np.asarray(self.f, dtype=float)
        self.g = np.asarray(self.g, dtype=float)
        if self.f.shape != self.g.shape or self.f.ndim != 1:
            raise FockConfigError("phase point needs two equal-length vectors")
        if not (np.isfinite(self.f).all() and np.isfinite(self.g).all()):
            raise FockConfigError("phase point entries must be finite")

    def __add__(self, other):
        return PhasePoint(self.f + other.f, self.g + other.g)

    def __sub__(self, other):
        return PhasePoint(self.f - other.f, self.g - other.g)

    def __mul__(self, c):
        return PhasePoint(self.f * c, self.g * c)

    __rmul__ = __mul__


class FockOperator:
    """Dense operator on the truncated Fock space."""

    __slots__ = ("field", "mat")

    def __init__(self, field, mat):
        self.field = field
        self.mat = np.asarray(mat, dtype=complex)

    def apply(self, vec):
        return self.mat @ vec

    def adjoint(self):
        return FockOperator(self.field, self.mat.conj().T)

    def __matmul__(self, other):
        return FockOperator(self.field, self.mat @ other.mat)

    def __add__(self, other):
        if isinstance(other, FockOperator):
            return FockOperator(self.field, self.mat + other.mat)
        return FockOperator(self.field, self.mat + other * np.eye(len(self.mat)))

    def __sub__(self, other):
        if isinstance(other, FockOperator):
            return FockOperator(self.field, self.mat - other.mat)
        return FockOperator(self.field, self.mat - other * np.eye(len(self.mat)))

    def __mul__(self, c):
        return FockOperator(self.field, self.mat * c)

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)

    def commutator(self, other):
        return FockOperator(self.field, self.mat @ other.mat - other.mat @ self.mat)

    def expectation(self, vec):
        return complex(np.vdot(vec, self.mat @ vec))

    def restricted(self, max_total):
        """Matrix block on the subspace with total number <= max_total."""
        k = self.field.sector_offsets[max_total + 1]
        return self.mat[:k, :k]

    def norm_on(self, max_total=None):
        m = self.mat if max_total is None else self.restricted(max_total)
        return float(np.linalg.norm(m, 2))


class FockField:
    """Lattice phase space plus the truncated Fock representation."""

    def __init__(self, nsites, m, nmax, hbar=1.0):
        if nsites < 4:
            raise FockConfigError("need at least 4 lattice sites")
        if nmax < 2:
            raise FockConfigError(
                "nmax >= 2 required: the duality and expectation checks "
                "reach the 2-particle sector")
        if m <= 0 or hbar <= 0:
            raise FockConfigError("m and hbar must be positive")
        self.nsites = int(nsites)
        self.m = float(m)
        self.nmax = int(nmax)
        self.hbar = float(hbar)
        k = np.arange(self.nsites)
        self.omega_k = np.sqrt(4.0 * np.sin(np.pi * k / self.nsites) ** 2 + self.m**2)

        # occupation basis ordered by total number, then lexicographically
        basis = []
        for total in range(self.nmax + 1):
            sector = set()
            for combo in combinations_with_replacement(range(self.nsites), total):
                occ = [0] * self.nsites
                for mode in combo:
                    occ[mode] += 1
                sector.add(tuple(occ))
            basis.extend(sorted(sector))
        self.basis = basis
        self.index = {occ: i for i, occ in enumerate(basis)}
        self.dim = len(basis)
        totals = np.array([sum(occ) for occ in basis])
        self.totals = totals
        self.sector_offsets = np.searchsorted(totals, np.arange(self.nmax + 2))

        self._mode_annihilators = [self._build_annihilator(kk)
                                   for kk in range(self.nsites)]

    def _build_annihilator(self, mode):
        mat = np.zeros((self.dim, self.dim))
        for col, occ in enumerate(self.basis):
            n = occ[mode]
            if n:
                target = list(occ)
                target[mode] = n - 1
                mat[self.index[tuple(target)], col] = np.sqrt(n)
        return mat

    # -- spectral operators on lattice functions --------------------------------

    def omega_power(self, vec, power):
        modes = np.fft.fft(np.asarray(vec, dtype=complex))
        modes *= self.omega_k**power
        out = np.fft.ifft(modes)
        return out

    def complex_structure(self, z: PhasePoint) -> PhasePoint:
        """J(f, g) = (-omega^-1 g, omega f); J o J = -identity."""
        return PhasePoint(-self.omega_power(z.g, -1).real,
                          self.omega_power(z.f, 1).real)

    def symplectic(self, z: PhasePoint, zp: PhasePoint) -> float:
        return float(np.dot(z.f, zp.g) - np.dot(zp.f, z.g))

    def one_particle_map(self, z: PhasePoint) -> np.ndarray:
        """K(f,g) = (omega^1/2 f + i omega^-1/2 g)/sqrt(2 hbar); K(Jz) = iK(z)."""
        return (self.omega_power(z.f, 0.5) + 1j * self.omega_power(z.g, -0.5)) \
            / np.sqrt(2.0 * self.hbar)

    # -- ladder and field operators -----------------------------------------------

    def _mode_coefficients(self, psi):
        # <e_k, psi> for the orthonormal Fourier modes e_k(x) = exp(2pi i kx/Ns)/sqrt(Ns)
        return np.fft.fft(np.asarray(psi, dtype=complex)) / np.sqrt(self.nsites)

    def annihilator(self, psi) -> FockOperator:
        """a(psi), antilinear in psi; a(psi)|0> = 0."""
        psi = np.asarray(psi, dtype=complex)
        if not np.any(psi):
            raise FockConfigError("a(psi) needs a nonzero 1-particle vector")
        coeffs = self._mode_coefficients(psi)
        mat = np.zeros((self.dim, self.dim), dtype=complex)
        for c, amat in zip(coeffs, self._mode_annihilators):
            if c:
                mat += np.conj(c) * amat
        return FockOperator(self, mat)

    def creator(self, psi) -> FockOperator:
        return self.annihilator(psi).adjoint()

    def ladder(self, psi):
        a = self.annihilator(psi)
        return a, a.adjoint()

    def number_op(self, psi) -> FockOperator:
        a = self.annihilator(psi)
        return a.adjoint() @ a

    def total_number_op(self) -> FockOperator:
        return FockOperator(self, np.diag(self.totals.astype(float)))

    def vacuum(self) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        vec[0] = 1.0
        return vec

    def one_particle_state(self, psi) -> np.ndarray:
        """|1_psi> = a^+(psi)|0> for normalized psi."""
        return self.creator(psi).apply(self.vacuum())

    def field_op(self, z: PhasePoint) -> FockOperator:
        """Phi(z) = -i hbar (a(Kz) - a^+(Kz)); self-adjoint."""
        a = self.annihilator(self.one_particle_map(z))
        adag = a.adjoint()
        return (a - adag) * (-1j * self.hbar)

    def local_field(self, x: int) -> FockOperator:
        """phi_hat(x) = Phi(0, -delta_x)."""
        delta = np.zeros(self.nsites)
        delta[x % self.nsites] = 1.0
        return self.field_op(PhasePoint(np.zeros(self.nsites), -delta))

    def local_momentum(self, x: int) -> FockOperator:
        """pi_hat(x) = Phi(delta_x, 0)."""
        delta = np.zeros(self.nsites)
        delta[x % self.nsites] = 1.0
        return self.field_op(PhasePoint(delta, np.zeros(self.nsites)))

    def smeared_profile(self, psi) -> np.ndarray:
        """|(omega^-1/2 psi)(x)|^2 site by site."""
        sm = self.omega_power(np.asarray(psi, dtype=complex), -0.5)
        return np.abs(sm) ** 2


# -- expectation-value suite ----------------------------------------------------------


@dataclass
class ExpectationCurves:
    sites: np.ndarray
    vacuum_sq: np.ndarray
    one_particle_sq: np.ndarray
    difference: np.ndarray
    predicted: np.ndarray
    vacuum_first: np.ndarray
    one_particle_first: np.ndarray
    max_first_moment: float
    max_difference_error: float
    vacuum_value_error: float


def expectation_suite(psi, field: FockField) -> ExpectationCurves:
    """Local-field expectation values in the vacuum and in |1_psi>.

    Asserted identities (checked by callers against their tolerance):
    <0|phi(x)|0> = <1|phi(x)|1> = 0, <0|phi(x)^2|0> = hbar/2 ||omega^-1/2 delta_x||^2,
    and the field-strength bump a 1-particle excitation adds,

        <1_psi|phi(x)^2|1_psi> - <0|phi(x)^2|0> = hbar |(omega^-1/2 psi)(x)|^2.
    """
    psi = np.asarray(psi, dtype=complex)
    nrm = np.linalg.norm(psi)
    if nrm == 0:
        raise FockConfigError("psi must be nonzero")
    psi = psi / nrm
    vac = field.vacuum()
    one = field.one_particle_state(psi)
    ns = field.nsites
    sites = np.arange(ns)
    vac_sq = np.zeros(ns)
    one_sq = np.zeros(ns)
    vac_first = np.zeros(ns)
    one_first = np.zeros(ns)
    predicted = field.hbar * field.smeared_profile(psi)
    for x in range(ns):
        phi = field.local_field(x)
        phi_sq = phi @ phi
        vac_first[x] = phi.expectation(vac).real
        one_first[x] = phi.expectation(one).real
        vac_sq[x] = phi_sq.expectation(vac).real
        one_sq[x] = phi_sq.expectation(one).real
    delta_profile = np.zeros(ns)
    for x in range(ns):
        d = np.zeros(ns)
        d[x] = 1.0
        delta_profile[x] = np.sum(np.abs(field.omega_power(d, -0.5)) ** 2)
    vacuum_expected = 0.5 * field.hbar * delta_profile
    diff = one_sq - vac_sq
    return ExpectationCurves(
        sites=sites, vacuum_sq=vac_sq, one_particle_sq=one_sq,
        difference=diff, predicted=predicted,
        vacuum_first=vac_first, one_particle_first=one_first,
        max_first_moment=float(max(np.abs(vac_first).max(), np.abs(one_first).max())),
        max_difference_error=float(np.abs(diff - predicted).max()),
        vacuum_value_error=float(np.abs(vac_sq - vacuum_expected).max()))


def profile_fwhm(profile) -> float:
    """Full width at half maximum of a peaked periodic lattice profile,
    with linear interpolation between sites."""
    prof = np.asarray(profile, dtype=float)
    n = len(prof)
    peak = int(np.argmax(prof))
    rolled = np.roll(prof, n // 2 - peak)   # center the peak
    half = rolled.max() / 2.0
    above = rolled >= half
    idx = np.where(above)[0]
    left, right = idx.min(), idx.max()

    def crossing(i0, i1):
        y0, y1 = rolled[i0], rolled[i1]
        if y1 == y0:
            return 0.0
        return (half - y0) / (y1 - y0)

    w = right - left
    if left > 0:
        w += 1.0 - crossing(left - 1, left)
    if right < n - 1:
        w += crossing(right, right + 1)
    return float(w)
