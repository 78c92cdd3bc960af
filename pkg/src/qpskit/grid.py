"""Momentum-grid realization of the operator algebra.

States live in the momentum representation on a uniform grid in
[-pmax, pmax)^d with a half-cell offset (no p = 0 node, so eliminated
denominators stay finite), with a spin index and a frequency-sector index:

    state shape = (*spatial, 2s+1, 2)        (leading batch axes allowed)

P_i acts by multiplication, Q_i = i*hbar d/dp_i spectrally through the
discrete Fourier transform (kernel exp(+i p x / hbar)/sqrt(2 pi hbar),
momentum -> position), S_i by Hermitian spin matrices, Lam by the sector
sign. Functions of P (omega, 1/(omega+m), ...) are exactly diagonal; the
canonical pair relation [Q, P] = i*hbar holds on band-limited states and
converges spectrally as the grid grows at fixed physical box.
"""

from __future__ import annotations

import numpy as np

from .expr import OperatorExpr
from .spin import check_spin, spin_matrices_numeric


class GridConfigError(ValueError):
    """Bad grid parameters or operator/grid mismatch."""


class UnsupportedSymbolError(GridConfigError):
    """Expression references symbols the grid cannot realize."""


class GridRep:
    """Finite momentum-grid representation (m, s) at desk scale."""

    def __init__(self, d=1, npts=64, pmax=6.0, m=1.0, s=0, hbar=1.0, tval=0.0):
        if d not in (1, 3):
            raise GridConfigError("d must be 1 or 3")
        if npts < 4 or npts % 2:
            raise GridConfigError("npts must be an even integer >= 4")
        if pmax <= 0 or m <= 0 or hbar <= 0:
            raise GridConfigError("pmax, m and hbar must be positive")
        self.d = d
        self.npts = int(npts)
        self.pmax = float(pmax)
        self.m = float(m)
        self.s = check_spin(s)
        self.nspin = int(2 * self.s + 1)
        self.hbar = float(hbar)
        self.tval = float(tval)

        n = self.npts
        self.dp = 2.0 * self.pmax / n
        self.p_axis = -self.pmax + (np.arange(n) + 0.5) * self.dp
        self.dx = 2.0 * np.pi * self.hbar / (n * self.dp)
        self.x_axis = (np.arange(n) - n // 2) * self.dx
        self.boxlen = n * self.dx

        # per-axis transform phases: p_j x_n = p0 x0 + n p0 dx + j dp x0 + 2 pi j n / N
        p0 = self.p_axis[0]
        x0 = self.x_axis[0]
        j = np.arange(n)
        self._phase_a = np.exp(1j * j * self.dp * x0 / self.hbar)
        self._phase_b = np.exp(1j * j * p0 * self.dx / self.hbar)
        self._phase0 = np.exp(1j * p0 * x0 / self.hbar)
        self._fwd_scale = self.dp * n / np.sqrt(2.0 * np.pi * self.hbar) * self._phase0
        self._bwd_scale = self.dx / np.sqrt(2.0 * np.pi * self.hbar) * np.conj(self._phase0)

        if d == 1:
            self.pmesh = (self.p_axis, 0.0, 0.0)
            self.psq = self.p_axis**2
        else:
            g = np.meshgrid(self.p_axis, self.p_axis, self.p_axis, indexing="ij")
            self.pmesh = (g[0], g[1], g[2])
            self.psq = g[0]**2 + g[1]**2 + g[2]**2
        self.omega = np.sqrt(self.psq + self.m**2)
        self.spin_mats = spin_matrices_numeric(self.s, self.hbar)
        self.sector_sign = np.array([1.0, -1.0])

    # -- state helpers --------------------------------------------------------

    @property
    def state_shape(self):
        return (self.npts,) * self.d + (self.nspin, 2)

    def _spatial_axes(self, arr):
        if arr.ndim < self.d + 2:
            raise GridConfigError("state array has too few axes for this grid")
        return tuple(range(arr.ndim - 2 - self.d, arr.ndim - 2))

    def norm(self, state):
        return float(np.sqrt(np.sum(np.abs(state) ** 2) * self.dp**self.d))

    def normalize(self, state):
        n = self.norm(state)
        if n == 0:
            raise GridConfigError("cannot normalize the zero state")
        return state / n

    def inner(self, a, b):
        return complex(np.vdot(a, b) * self.dp**self.d)

    # -- momentum <-> position ------------------------------------------------

    def _axis_mul(self, arr, vec, axis):
        shape = [1] * arr.ndim
        shape[axis] = len(vec)
        return arr * vec.reshape(shape)

    def to_position(self, state):
        out = np.asarray(state, dtype=complex)
        for ax in self._spatial_axes(out):
            out = self._axis_mul(out, self._phase_a, ax)
            out = np.fft.ifft(out, axis=ax)
            out = self._axis_mul(out, self._phase_b, ax)
            out = out * self._fwd_scale
        return out

    def to_momentum(self, state):
        out = np.asarray(state, dtype=complex)
        for ax in self._spatial_axes(out):
            out = self._axis_mul(out, np.conj(self._phase_b), ax)
            out = np.fft.fft(out, axis=ax)
            out = self._axis_mul(out, np.conj(self._phase_a), ax)
            out = out * self._bwd_scale
        return out

    # -- coefficient evaluation -------------------------------------------------

    def eval_coeff(self, coeff):
        for bad in ("Mmass", "E0"):
            if coeff.uses_gen(bad):
                raise UnsupportedSymbolError(
                    f"symbol {bad} has no grid realization")
        values = [self.pmesh[0], self.pmesh[1], self.pmesh[2],
                  self.m, self.tval, self.hbar, 0.0, 0.0]
        return coeff.evaluate(values, self.omega)


class LinearMap:
    """Composable linear operator on grid states."""

    def __init__(self, grid: GridRep, apply_fn, adjoint_fn=None, label=""):
        self.grid = grid
        self._apply = apply_fn
        self._adjoint = adjoint_fn
        self.label = label

    def apply(self, state):
        return self._apply(state)

    def __call__(self, state):
        return self._apply(state)

    def adjoint(self) -> "LinearMap":
        if self._adjoint is None:
            raise GridConfigError(f"map {self.label or '<anon>'} has no adjoint")
        return LinearMap(self.grid, self._adjoint, self._apply,
                         label=f"adj({self.label})")

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        if self.grid is not other.grid:
            raise GridConfigError("composing maps over different grids")
        adj = None
        if self._adjoint is not None and other._adjoint is not None:
            adj = lambda v: other._adjoint(self._adjoint(v))
        return LinearMap(self.grid, lambda v: self._apply(other._apply(v)), adj,
                         label=f"({self.label} @ {other.label})")

    def __add__(self, other: "LinearMap") -> "LinearMap":
        adj = None
        if self._adjoint is not None and other._adjoint is not None:
            adj = lambda v: self._adjoint(v) + other._adjoint(v)
        return LinearMap(self.grid, lambda v: self._apply(v) + other._apply(v),
                         adj, label=f"({self.label} + {other.label})")

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return self + (other * (-1.0))

    def __mul__(self, c) -> "LinearMap":
        c = complex(c)
        adj = None
        if self._adjoint is not None:
            adj = lambda v: np.conj(c) * self._adjoint(v)
        return LinearMap(self.grid, lambda v: c * self._apply(v), adj,
                         label=f"({c} * {self.label})")

    __rmul__ = __mul__


def identity_map(grid: GridRep) -> LinearMap:
    return LinearMap(grid, lambda v: v.copy(), lambda v: v.copy(), label="1")


def map_commutator(a: LinearMap, b: LinearMap) -> LinearMap:
    return a @ b - b @ a


# -- realization ------------------------------------------------------------------


def _compile_terms(e: OperatorExpr, grid: GridRep):
    groups = {}
    for mono, coeff in e.terms.items():
        qmono = mono[:3]
        smono = mono[3:6]
        lam = mono[6]
        if grid.d == 1 and (qmono[1] or qmono[2]):
            raise UnsupportedSymbolError(
                "Q2/Q3 cannot be realized on a 1-dimensional grid")
        carr = grid.eval_coeff(coeff)
        if isinstance(carr, np.ndarray):
            carr = carr[..., None, None]
        smat = None
        if smono != (0, 0, 0):
            smat = np.eye(grid.nspin, dtype=complex)
            for idx, expnt in enumerate(smono):
                for _ in range(expnt):
                    smat = smat @ grid.spin_mats[idx]
        key = (smono, lam)
        groups.setdefault(key, {"smat": smat, "lam": lam, "terms": []})
        groups[key]["terms"].append((qmono, carr))
    return list(groups.values())


def _x_power(grid: GridRep, qmono):
    axes_vals = None
    if grid.d == 1:
        axes_vals = grid.x_axis ** qmono[0]
        return axes_vals[:, None, None]
    xs = np.meshgrid(grid.x_axis, grid.x_axis, grid.x_axis, indexing="ij")
    out = np.ones_like(xs[0])
    for i in range(3):
        if qmono[i]:
            out = out * xs[i] ** qmono[i]
    return out[..., None, None]


def realize(e: OperatorExpr, grid: GridRep) -> LinearMap:
    """Concrete linear operator for a normal-form expression.

    Linear in e; realize(nf(e)) and realize(e) agree to roundoff on
    band-limited states.
    """
    groups = _compile_terms(e, grid)
    qpowers = {}
    for g in groups:
        for qmono, _ in g["terms"]:
            if any(qmono) and qmono not in qpowers:
                qpowers[qmono] = _x_power(grid, qmono)

    def apply_fn(state):
        state = np.asarray(state, dtype=complex)
        out = np.zeros(np.broadcast_shapes(state.shape,
                                           (1,) * (state.ndim - 2) + (grid.nspin, 2)),
                       dtype=complex)
        for g in groups:
            phi = state
            if g["lam"]:
                phi = phi * grid.sector_sign
            if g["smat"] is not None:
                phi = np.einsum("ij,...jk->...ik", g["smat"], phi)
            with_q = {}
            for qmono, carr in g["terms"]:
                if any(qmono):
                    with_q.setdefault(qmono, []).append(carr)
                else:
                    out = out + carr * phi
            if with_q:
                chi = grid.to_position(phi)
                for qmono, coeffs in with_q.items():
                    back = grid.to_momentum(qpowers[qmono] * chi)
                    for carr in coeffs:
                        out = out + carr * back
        return out

    def adjoint_fn(state):
        state = np.asarray(state, dtype=complex)
        out = np.zeros(np.broadcast_shapes(state.shape,
                                           (1,) * (state.ndim - 2) + (grid.nspin, 2)),
                       dtype=complex)
        for g in groups:
            acc = None
            for qmono, carr in g["terms"]:
                phi = np.conj(carr) * state
                if any(qmono):
                    phi = grid.to_momentum(qpowers[qmono] * grid.to_position(phi))
                acc = phi if acc is None else acc + phi
            if acc is None:
                continue
            if g["smat"] is not None:
                acc = np.einsum("ij,...jk->...ik", np.conj(g["smat"].T), acc)
            if g["lam"]:
                acc = acc * grid.sector_sign
            out = out + acc
        return out

    return LinearMap(grid, apply_fn, adjoint_fn, label="realized")


# -- sample states and residual norms -----------------------------------------------


def gaussian_states(grid: GridRep, nstates=8, seed=0, width_scale=1.0, sector=None):
    """Seeded band-limited test family: centered complex Gaussians with
    randomized widths, position offsets and spin/sector amplitudes.

    The width is centered on the balance point sigma_p = sqrt(2/(pi N)) pmax
    where momentum-edge and position-wrap tails are equally small (both
    exp(-pi N / 4)); residuals of true identities then converge spectrally
    as the grid is refined. ``sector`` restricts amplitudes to one frequency
    sector (+1 or -1).
    """
    rng = np.random.default_rng(seed)
    states = []
    halfbox = grid.boxlen / 2.0
    balanced = np.sqrt(2.0 / (np.pi * grid.npts)) * grid.pmax
    for _ in range(nstates):
        sigmas = rng.uniform(0.95, 1.05, size=grid.d) * balanced * width_scale
        shifts = rng.uniform(-0.03, 0.03, size=grid.d) * halfbox
        envelope = None
        for a in range(grid.d):
            p = grid.p_axis
            g1 = np.exp(-p**2 / (2.0 * sigmas[a]**2) - 1j * p * shifts[a] / grid.hbar)
            if envelope is None:
                envelope = g1
            else:
                envelope = np.multiply.outer(envelope, g1)
        amps = rng.normal(size=(grid.nspin, 2)) + 1j * rng.normal(size=(grid.nspin, 2))
        if sector is not None:
            col = 0 if sector > 0 else 1
            mask = np.zeros((1, 2))
            mask[0, col] = 1.0
            amps = amps * mask
        state = envelope[..., None, None] * amps
        states.append(grid.normalize(state))
    return states


def band_limit_fraction(grid: GridRep, state, cells=10):
    """Probability mass within ``cells`` grid cells of the momentum-box edge."""
    mask = np.zeros((grid.npts,), dtype=bool)
    mask[:cells] = True
    mask[-cells:] = True
    prob = np.abs(state) ** 2
    total = prob.sum()
    if total == 0:
        return 1.0
    edge = 0.0
    for a in range(grid.d):
        sl = [slice(None)] * prob.ndim
        sl[prob.ndim - 2 - grid.d + a] = mask
        edge += prob[tuple(sl)].sum()
    return float(edge / total)


class ResidualResult(float):
    """Max relative residual over the sample family, with warnings attached."""

    def __new__(cls, value, per_state, warnings):
        obj = super().__new__(cls, value)
        obj.per_state = per_state
        obj.warnings = warnings
        return obj


def residual_norm(e_or_map, grid: GridRep, states=None, nstates=8, seed=0) -> ResidualResult:
    """max over sample states of ||A psi|| / ||psi||.

    ``e_or_map`` may be an OperatorExpr (realized here) or a prebuilt
    LinearMap (e.g. a numerically composed commutator residual).
    """
    amap = e_or_map if isinstance(e_or_map, LinearMap) else realize(e_or_map, grid)
    if states is None:
        states = gaussian_states(grid, nstates=nstates, seed=seed)
    warnings = []
    for k, psi in enumerate(states):
        frac = band_limit_fraction(grid, psi)
        # 1e-3 of mass ten cells in (with Gaussian falloff) still leaves the
        # edge itself at roundoff level; larger fractions mean real clipping
        if frac > 1e-3:
            warnings.append(
                f"state {k}: {frac:.2e} of probability within 10 cells of "
                f"the momentum-box edge (band-limit precondition)")
    batch = np.stack(states, axis=0)
    out = amap.apply(batch)
    axes = tuple(range(1, out.ndim))
    out_norms = np.sqrt(np.sum(np.abs(out) ** 2, axis=axes))
    in_norms = np.sqrt(np.sum(np.abs(batch) ** 2, axis=axes))
    values = list(out_norms / in_norms)
    return ResidualResult(max(values), values, warnings)


def operator_norm(amap: LinearMap, seed=0, iterations=200, tol=1e-12) -> float:
    """Largest singular value by power iteration on A^dag A."""
    grid = amap.grid
    rng = np.random.default_rng(seed)
    v = rng.normal(size=grid.state_shape) + 1j * rng.normal(size=grid.state_shape)
    v /= np.sqrt(np.sum(np.abs(v) ** 2))
    adj = amap.adjoint()
    lam_prev = 0.0
    lam = 0.0
    for _ in range(iterations):
        w = adj.apply(amap.apply(v))
        lam = float(np.real(np.vdot(v, w)))
        nw = np.sqrt(np.sum(np.abs(w) ** 2))
        if nw == 0:
            return 0.0
        v = w / nw
        if abs(lam - lam_prev) <= tol * max(abs(lam), 1e-30):
            break
        lam_prev = lam
    return float(np.sqrt(max(lam, 0.0)))
