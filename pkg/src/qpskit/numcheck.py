"""Numeric mirrors of the symbolic verification suites.

Each check realizes the participating operators separately and composes them
on the grid (commutators as differences of compositions), so the numeric
route never consumes a symbolically simplified residual: a relation that the
symbolic engine proves equal to zero is re-derived here from floating-point
operator algebra on band-limited sample states.
"""

from __future__ import annotations

import numpy as np

from .generators import AXES, GeneratorSet, _table_expected, eps
from .grid import GridRep, gaussian_states, realize
from .report import VerificationReport

DEFAULT_TOL = 1e-6


class _MapCache:
    """Realized generator maps plus their action on the state batch."""

    def __init__(self, gens: GeneratorSet, grid: GridRep, batch):
        self.gens = gens
        self.grid = grid
        self.batch = batch
        self.maps = {}
        self.applied = {}
        self.in_norms = self._norms(batch)

    def _norms(self, arr):
        axes = tuple(range(1, arr.ndim))
        return np.sqrt(np.sum(np.abs(arr) ** 2, axis=axes))

    def map(self, name):
        if name not in self.maps:
            self.maps[name] = realize(self.gens[name], self.grid)
        return self.maps[name]

    def on_batch(self, name):
        if name not in self.applied:
            self.applied[name] = self.map(name).apply(self.batch)
        return self.applied[name]

    def residual(self, arr):
        return float(np.max(self._norms(arr) / self.in_norms))

    def comm_batch(self, a, b):
        """[A, B] applied to the batch via cached single applications."""
        return self.map(a).apply(self.on_batch(b)) - self.map(b).apply(self.on_batch(a))


def _make_batch(grid, nstates, seed, sector=None):
    return np.stack(gaussian_states(grid, nstates=nstates, seed=seed,
                                    sector=sector), axis=0)


def numeric_table_report(gens: GeneratorSet, grid: GridRep, which="poincare",
                         nstates=8, seed=0, tol=DEFAULT_TOL) -> VerificationReport:
    """Grid residuals for all 100 ordered table commutators."""
    report = VerificationReport(f"numeric_{which}")
    names, expected_of = _table_expected(gens, which)
    batch = _make_batch(grid, nstates, seed)
    cache = _MapCache(gens, grid, batch)
    ih = 1j * grid.hbar
    # expected values are linear combinations of cached generator actions
    for a in names:
        for b in names:
            want = expected_of(a, b)
            acc = cache.comm_batch(a, b) / ih
            if want:
                acc = acc - realize(want, grid).apply(batch)
            r = cache.residual(acc)
            report.add(id=f"[{a},{b}]", lhs=f"grid (1/(i*hbar))*[{a},{b}]",
                       expected="symbolic table value", residual=f"{r:.3e}",
                       passed=r <= tol, residual_norm=r)
    return report


def numeric_lemma_report(gens: GeneratorSet, grid: GridRep, nstates=8, seed=0,
                         tol=DEFAULT_TOL) -> VerificationReport:
    """Grid residuals for the conservation/covariance conclusions."""
    report = VerificationReport("numeric_lemmas")
    batch = _make_batch(grid, nstates, seed)
    cache = _MapCache(gens, grid, batch)
    ih = 1j * grid.hbar

    def add(check_id, arr):
        r = cache.residual(arr)
        report.add(id=check_id, lhs=check_id, expected="0", residual=f"{r:.3e}",
                   passed=r <= tol, residual_norm=r)

    for i in AXES:
        for j in AXES:
            acc = cache.comm_batch(f"Q{i}", f"P{j}") / ih
            if i == j:
                acc = acc - batch
            add(f"heisenberg[{i},{j}]", acc)
            add(f"velocity_translation[{i},{j}]",
                cache.comm_batch(f"V{i}", f"P{j}"))
            add(f"position_spin[{i},{j}]", cache.comm_batch(f"Q{i}", f"S{j}"))
            acc = cache.comm_batch(f"Q{i}", f"L{j}") / ih
            for k in AXES:
                e = eps(i, j, k)
                if e:
                    acc = acc - e * cache.on_batch(f"Q{k}")
            add(f"position_rotation[{i},{j}]", acc)
            acc = cache.comm_batch(f"S{i}", f"J{j}") / ih
            for k in AXES:
                e = eps(i, j, k)
                if e:
                    acc = acc - e * cache.on_batch(f"S{k}")
            add(f"spin_rotation[{i},{j}]", acc)
            if i < j:
                add(f"position_commuting[{i},{j}]",
                    cache.comm_batch(f"Q{i}", f"Q{j}"))
                acc = cache.comm_batch(f"S{i}", f"S{j}") / ih
                for k in AXES:
                    e = eps(i, j, k)
                    if e:
                        acc = acc - e * cache.on_batch(f"S{k}")
                add(f"spin_algebra[{i},{j}]", acc)
    # velocity parallel to momentum: (VxP) psi = 0
    for i in AXES:
        acc = None
        for j in AXES:
            for k in AXES:
                e = eps(i, j, k)
                if e:
                    piece = e * cache.map(f"V{j}").apply(cache.on_batch(f"P{k}"))
                    acc = piece if acc is None else acc + piece
        add(f"velocity_parallel[{i}]", acc)
    for i in AXES:
        add(f"velocity_conserved[{i}]", cache.comm_batch(f"V{i}", "H"))
        add(f"spin_conserved[{i}]", cache.comm_batch(f"S{i}", "H"))
        add(f"spin_even[{i}]", cache.comm_batch(f"S{i}", "Lam"))
        add(f"internal_boost_conserved[{i}]", cache.comm_batch(f"N{i}", "H"))
        add(f"internal_boost_even[{i}]", cache.comm_batch(f"N{i}", "Lam"))
        # dM/dt = dM/dt|explicit + [M,H]/(i hbar); the explicit part is P
        acc = cache.on_batch(f"P{i}") + cache.comm_batch(f"M{i}", "H") / ih
        add(f"m_conserved[{i}]", acc)
    return report


def numeric_pl_report(gens: GeneratorSet, grid: GridRep, nstates=8, seed=0,
                      tol=DEFAULT_TOL) -> VerificationReport:
    """Grid residuals for W.P orthogonality and W0 = S.P."""
    report = VerificationReport("numeric_pauli_lubanski")
    batch = _make_batch(grid, nstates, seed)
    cache = _MapCache(gens, grid, batch)
    acc = cache.map("W0").apply(cache.on_batch("H"))
    for i in AXES:
        acc = acc - cache.map(f"W{i}").apply(cache.on_batch(f"P{i}"))
    r = cache.residual(acc)
    report.add(id="orthogonality", lhs="grid W0*H - W.P", expected="0",
               residual=f"{r:.3e}", passed=r <= tol, residual_norm=r)
    acc = cache.on_batch("W0")
    for i in AXES:
        acc = acc - cache.map(f"S{i}").apply(cache.on_batch(f"P{i}"))
    r = cache.residual(acc)
    report.add(id="w0_is_spin_momentum", lhs="grid W0 - S.P", expected="0",
               residual=f"{r:.3e}", passed=r <= tol, residual_norm=r)
    return report


def numeric_casimir_report(gens: GeneratorSet, grid: GridRep, nstates=8,
                           seed=0, tol=DEFAULT_TOL) -> VerificationReport:
    """Spectrum of W0^2 - W.W on per-sector band-limited states.

    The squared Pauli-Lubanski vector must act as -hbar^2 m^2 s(s+1) on each
    frequency sector, both as a quadratic form and in residual norm.
    """
    report = VerificationReport("numeric_casimir")
    s = float(grid.s)
    target = -grid.hbar**2 * grid.m**2 * s * (s + 1.0)
    scale = abs(target) if target else 1.0
    for sector, tag in ((1, "positive"), (-1, "negative")):
        batch = _make_batch(grid, nstates, seed, sector=sector)
        cache = _MapCache(gens, grid, batch)
        w0w0 = cache.map("W0").apply(cache.on_batch("W0"))
        acc = w0w0
        for i in AXES:
            acc = acc - cache.map(f"W{i}").apply(cache.on_batch(f"W{i}"))
        resid = acc - target * batch
        r = cache.residual(resid) / scale
        report.add(id=f"spectrum[{tag}]", lhs="(W0^2 - W.W) psi",
                   expected=f"{target:.6g} * psi", residual=f"{r:.3e}",
                   passed=r <= tol, residual_norm=r)
        axes = tuple(range(1, batch.ndim))
        forms = np.sum(np.conj(batch) * acc, axis=axes).real \
            / np.sum(np.abs(batch) ** 2, axis=axes)
        worst = float(np.max(np.abs(forms - target))) / scale
        report.add(id=f"quadratic_form[{tag}]", lhs="<psi,(W0^2-W.W)psi>/|psi|^2",
                   expected=f"{target:.6g}", residual=f"{worst:.3e}",
                   passed=worst <= tol, residual_norm=worst)
    return report


def convergence_report(make_report, grid_small: GridRep, grid_big: GridRep,
                       min_ratio=4.0, floor=1e-11) -> VerificationReport:
    """Spectral-convergence assertion between two grids.

    Each entry passes when the residual shrinks by at least ``min_ratio``
    going to the finer grid, or when the finer-grid residual already sits at
    roundoff (relations realized exactly on the grid have no error to shrink).
    """
    small = make_report(grid_small)
    big = make_report(grid_big)
    report = VerificationReport(f"convergence_{big.suite}")
    by_id = {e.id: e for e in small.entries}
    for e in big.entries:
        s = by_id.get(e.id)
        if s is None or s.residual_norm is None or e.residual_norm is None:
            continue
        rb = e.residual_norm
        rs = s.residual_norm
        ok = rb <= floor or (rb > 0 and rs / rb >= min_ratio)
        ratio = rs / rb if rb > 0 else float("inf")
        report.add(id=e.id,
                   lhs=f"residual({grid_small.npts})/residual({grid_big.npts})",
                   expected=f">= {min_ratio} (or fine grid at roundoff)",
                   residual=f"{rs:.3e} -> {rb:.3e} (ratio {ratio:.1f})",
                   passed=ok, residual_norm=rb)
    return report
