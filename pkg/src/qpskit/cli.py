"""Batch entry point: run verification suites and demos, write reports.

Exit status: 0 when every asserted check passes, 1 when any fails (reports
are still written), 2 for usage errors. Artifacts are written atomically and
are byte-identical for identical configuration and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

import numpy as np

from .coeffs import AlgebraContext
from .expr import ExprError
from .fock import FockField, PhasePoint, expectation_suite, profile_fwhm
from .generators import (bargmann_generators, boost_matrix_identities,
                         casimirs, check_table, energy_momentum_constraint_check,
                         foldy_generators, lemma_suite, pauli_lubanski)
from .grid import GridRep, GridConfigError
from .localization import microcausality_check, nw_evolution
from .numcheck import (convergence_report, numeric_casimir_report,
                       numeric_lemma_report, numeric_pl_report,
                       numeric_table_report)
from .parser import ExprSyntaxError, parse_expr
from .report import VerificationReport


def _write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-artifact-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(payload):
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _report_csv(report: VerificationReport):
    lines = ["id,pass,asserted,lhs,expected,residual"]
    for e in report.entries:
        def q(s):
            s = str(s).replace('"', "'")
            return f'"{s}"' if ("," in s or '"' in str(s)) else s
        lines.append(",".join([q(e.id), str(e.passed).lower(),
                               str(e.asserted).lower(), q(e.lhs),
                               q(e.expected), q(e.residual)]))
    return "\n".join(lines) + "\n"


def _emit_report(report: VerificationReport, args, quiet=False):
    if not quiet:
        for line in report.lines():
            print(line)
        print(report.summary())
    if args.out:
        if args.format == "csv":
            _write_atomic(args.out, _report_csv(report))
        else:
            _write_atomic(args.out, report.to_json() + "\n")
    return 0 if report.all_passed() else 1


def _merge(suite_name, reports):
    merged = VerificationReport(suite_name)
    for rep in reports:
        for e in rep.entries:
            e.id = f"{rep.suite}:{e.id}"
            merged.entries.append(e)
    return merged


# -- verify ---------------------------------------------------------------------


def _cmd_verify(args):
    ctx = AlgebraContext.get(Fraction(args.mass_factor))
    spin = Fraction(args.casimir_spin) if args.casimir_spin else None
    if args.suite == "poincare":
        rep = check_table(foldy_generators(ctx=ctx), "poincare", casimir_spin=spin)
    elif args.suite == "spinless":
        rep = check_table(foldy_generators(ctx=ctx), "poincare_spinless",
                          casimir_spin=spin)
    elif args.suite == "bargmann":
        rep = check_table(bargmann_generators(ctx=ctx), "bargmann")
    elif args.suite == "lemmas":
        rep = lemma_suite(foldy_generators(ctx=ctx))
    elif args.suite == "casimirs":
        rep = casimirs(foldy_generators(ctx=ctx))
    elif args.suite == "pl":
        rep = pauli_lubanski(foldy_generators(ctx=ctx))
    elif args.suite == "boost":
        rep = boost_matrix_identities(ctx=ctx)
    else:  # emrelation
        try:
            h = parse_expr(args.h, ctx=ctx)
            rep = energy_momentum_constraint_check(h, ctx=ctx)
        except (ExprSyntaxError, ExprError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    return _emit_report(rep, args)


# -- numeric --------------------------------------------------------------------


def _grid_from_args(args, d=None):
    return GridRep(d=d if d is not None else args.d, npts=args.npts,
                   pmax=args.pmax, m=args.m, s=Fraction(args.s),
                   tval=args.t, hbar=1.0)


def _cmd_numeric(args):
    gens = foldy_generators()
    if args.d != 3:
        print("error: the table/lemma cross-checks need all three axes; "
              "use --d 3", file=sys.stderr)
        return 2
    if args.suite == "casimir":
        grid = _grid_from_args(args, d=3)
        rep = numeric_casimir_report(gens, grid, nstates=args.nstates,
                                     seed=args.seed, tol=args.tol)
        return _emit_report(rep, args)
    grid = _grid_from_args(args, d=3)
    reports = [
        numeric_table_report(gens, grid, "poincare", nstates=args.nstates,
                             seed=args.seed, tol=args.tol),
        numeric_lemma_report(gens, grid, nstates=args.nstates,
                             seed=args.seed, tol=args.tol),
        numeric_pl_report(gens, grid, nstates=args.nstates,
                          seed=args.seed, tol=args.tol),
    ]
    if args.convergence:
        coarse = GridRep(d=3, npts=args.npts // 2, pmax=args.pmax, m=args.m,
                         s=Fraction(args.s), tval=args.t)
        reports.append(convergence_report(
            lambda gr: numeric_table_report(gens, gr, "poincare",
                                            nstates=min(args.nstates, 4),
                                            seed=args.seed + 1, tol=np.inf),
            coarse, grid))
    return _emit_report(_merge("numeric_residuals", reports), args)


# -- localize ---------------------------------------------------------------------


def _cmd_localize(args):
    grid = GridRep(d=1, npts=args.npts, pmax=args.pmax, m=args.m, s=0)
    try:
        res = nw_evolution(args.y, args.sigma, args.t, grid)
    except (GridConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    summary = {
        "outside_cone_probability": res.outside_cone_probability,
        "fitted_slope": res.fitted_slope,
        "fit_points": res.fit_points,
        "params": res.params,
        "seed": args.seed,
    }
    print(_json_text(summary), end="")
    if args.out:
        csv_lines = ["x,t,density"]
        for xv, dv in zip(res.x, res.density):
            csv_lines.append(f"{float(xv)!r},{float(args.t)!r},{float(dv)!r}")
        _write_atomic(args.out, "\n".join(csv_lines) + "\n")
        base, _ = os.path.splitext(args.out)
        _write_atomic(base + ".json", _json_text(summary))
    return 0 if res.outside_cone_probability >= 0 else 1


def _cmd_causality(args):
    grid = GridRep(d=1, npts=args.npts, pmax=args.pmax, m=args.m, s=0)
    r = tuple(args.r)
    rp = tuple(args.rp)
    report = VerificationReport("causality")
    try:
        equal = microcausality_check(r, args.tr, rp, args.tr, grid, seed=args.seed)
        moved = microcausality_check(r, args.tr, rp, args.trp, grid, seed=args.seed)
    except (GridConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    disjoint = r[1] < rp[0] or rp[1] < r[0]
    gap = max(rp[0] - r[1], r[0] - rp[1])
    spacelike = disjoint and gap > abs(args.trp - args.tr)
    report.add(id="equal_time", lhs=f"|| [P_R({args.tr}), P_R'({args.tr})] ||",
               expected="0 (disjoint regions at equal time)",
               residual=f"{equal:.3e}", passed=equal <= 1e-10,
               asserted=disjoint, residual_norm=equal)
    report.add(id="unequal_time", lhs=f"|| [P_R({args.tr}), P_R'({args.trp})] ||",
               expected="> 1e-6 (localization is not causally sharp)",
               residual=f"{moved:.3e}", passed=moved > 1e-6,
               asserted=spacelike and args.trp != args.tr,
               residual_norm=moved,
               note="" if spacelike else "regions not spacelike separated; recorded only")
    return _emit_report(report, args)


# -- fock -------------------------------------------------------------------------


def _fock_report(args):
    """Returns (report, expectation curves or None)."""
    field = FockField(args.sites, args.m, args.nmax)
    tol = args.tol
    rng = np.random.default_rng(args.seed)
    report = VerificationReport(f"fock_{args.suite}")
    if args.suite == "duality":
        for trial in range(3):
            z = PhasePoint(rng.normal(size=args.sites), rng.normal(size=args.sites))
            zp = PhasePoint(rng.normal(size=args.sites), rng.normal(size=args.sites))
            ccr = field.field_op(z).commutator(field.field_op(zp)) \
                - 1j * field.hbar * field.symplectic(z, zp)
            dev = ccr.norm_on(field.nmax - 1)
            report.add(id=f"ccr[{trial}]", lhs="[Phi(z),Phi(z')]",
                       expected="i*hbar*Omega(z,z')", residual=f"{dev:.3e}",
                       passed=dev <= tol, residual_norm=dev)
            a = field.annihilator(field.one_particle_map(z))
            rhs = (1j * field.field_op(z)
                   - field.field_op(field.complex_structure(z))) * (1 / (2 * field.hbar))
            dev = float(np.abs(a.mat - rhs.mat).max())
            report.add(id=f"interdefinability[{trial}]", lhs="a(Kz)",
                       expected="(i*Phi(z) - Phi(Jz))/(2*hbar)",
                       residual=f"{dev:.3e}", passed=dev <= tol, residual_norm=dev)
            kj = field.one_particle_map(field.complex_structure(z)) \
                - 1j * field.one_particle_map(z)
            dev = float(np.abs(kj).max())
            report.add(id=f"complex_structure[{trial}]", lhs="K(Jz)",
                       expected="i*K(z)", residual=f"{dev:.3e}",
                       passed=dev <= tol, residual_norm=dev)
        psi = rng.normal(size=args.sites) + 1j * rng.normal(size=args.sites)
        psi /= np.linalg.norm(psi)
        a, adag = field.ladder(psi)
        n_op = adag @ a
        dev = float(np.abs(((n_op + 1.0) @ a).mat - (a @ n_op).mat).max())
        report.add(id="ladder_shift", lhs="(N(psi)+1)*a(psi)", expected="a(psi)*N(psi)",
                   residual=f"{dev:.3e}", passed=dev <= tol, residual_norm=dev)
        dev = float(np.abs(a.apply(field.vacuum())).max())
        report.add(id="vacuum_condition", lhs="a(psi)|0>", expected="0",
                   residual=f"{dev:.3e}", passed=dev <= tol, residual_norm=dev)
        phi_x = field.local_field(0)
        dev = float(np.abs(phi_x.mat - phi_x.adjoint().mat).max())
        report.add(id="field_self_adjoint", lhs="phi(0) - phi(0)^dag", expected="0",
                   residual=f"{dev:.3e}", passed=dev <= tol, residual_norm=dev)
        return report, None
    if args.suite == "spectrum":
        psi = rng.normal(size=args.sites) + 1j * rng.normal(size=args.sites)
        psi /= np.linalg.norm(psi)
        evals = np.linalg.eigvalsh(field.number_op(psi).mat)
        dev = float(np.abs(evals - np.round(evals)).max())
        report.add(id="integer_spectrum", lhs="spec N(psi)",
                   expected="integers", residual=f"{dev:.3e}",
                   passed=dev <= tol, residual_norm=dev)
        present = sorted(set(int(round(v)) for v in evals))
        expected = list(range(field.nmax + 1))
        report.add(id="spectrum_range", lhs=str(present), expected=str(expected),
                   residual="match" if present == expected else "mismatch",
                   passed=present == expected)
        total = field.total_number_op()
        kernel_dim = int(np.sum(np.abs(np.diag(total.mat)) < 1e-12))
        report.add(id="vacuum_unique", lhs="dim ker(sum_k N(e_k))", expected="1",
                   residual=str(kernel_dim), passed=kernel_dim == 1)
        return report, None
    # expectation
    psi = np.zeros(args.sites)
    psi[args.sites // 2] = 1.0
    curves = expectation_suite(psi, field)
    report.add(id="first_moments", lhs="<0|phi|0>, <1|phi|1>", expected="0",
               residual=f"{curves.max_first_moment:.3e}",
               passed=curves.max_first_moment <= tol,
               residual_norm=curves.max_first_moment)
    report.add(id="vacuum_value", lhs="<0|phi(x)^2|0>",
               expected="hbar/2*||omega^-1/2 delta_x||^2",
               residual=f"{curves.vacuum_value_error:.3e}",
               passed=curves.vacuum_value_error <= tol,
               residual_norm=curves.vacuum_value_error)
    report.add(id="difference_formula", lhs="<1|phi(x)^2|1> - <0|phi(x)^2|0>",
               expected="hbar*|(omega^-1/2 psi)(x)|^2",
               residual=f"{curves.max_difference_error:.3e}",
               passed=curves.max_difference_error <= tol,
               residual_norm=curves.max_difference_error)
    w_heavy = profile_fwhm(FockField(args.sites, 2.0, 2).smeared_profile(psi))
    w_light = profile_fwhm(FockField(args.sites, 0.5, 2).smeared_profile(psi))
    report.add(id="peak_narrows_with_mass", lhs=f"FWHM(m=2)={w_heavy:.4f}",
               expected=f"< FWHM(m=0.5)={w_light:.4f}",
               residual=f"{w_heavy - w_light:+.4f}", passed=w_heavy < w_light)
    return report, curves


def _cmd_fock(args):
    rep, curves = _fock_report(args)
    if curves is not None and args.out and args.format == "csv":
        lines = ["x,vacuum_sq,one_particle_sq,difference,predicted"]
        for i in range(args.sites):
            lines.append(f"{int(curves.sites[i])},{float(curves.vacuum_sq[i])!r},"
                         f"{float(curves.one_particle_sq[i])!r},"
                         f"{float(curves.difference[i])!r},"
                         f"{float(curves.predicted[i])!r}")
        _write_atomic(args.out, "\n".join(lines) + "\n")
        for line in rep.lines():
            print(line)
        print(rep.summary())
        return 0 if rep.all_passed() else 1
    return _emit_report(rep, args)


# -- parser --------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qpskit",
        description="Verify the canonical position/momentum/spin operator "
                    "algebra symbolically and on finite grids, and run the "
                    "localization and field/particle-duality demos.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common_out(p):
        p.add_argument("--out", default=None, help="artifact path")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-6)

    pv = sub.add_parser("verify", help="symbolic suites (exact)")
    pv.add_argument("suite", choices=("poincare", "spinless", "bargmann",
                                      "lemmas", "casimirs", "pl", "boost",
                                      "emrelation"))
    pv.add_argument("--h", default="Lam*omega",
                    help="candidate Hamiltonian for emrelation")
    pv.add_argument("--mass-factor", default="1",
                    help="rescale the energy-momentum relation to "
                         "omega^2 = P^2 + (k*m)^2")
    pv.add_argument("--casimir-spin", default=None,
                    help="apply S^2 -> hbar^2 s(s+1) during normalization")
    common_out(pv)
    pv.set_defaults(func=_cmd_verify)

    pn = sub.add_parser("numeric", help="momentum-grid cross-checks")
    pn.add_argument("suite", choices=("residuals", "casimir"))
    pn.add_argument("--d", type=int, default=3, choices=(1, 3))
    pn.add_argument("--npts", type=int, default=32)
    pn.add_argument("--pmax", type=float, default=2.0)
    pn.add_argument("--m", type=float, default=1.0)
    pn.add_argument("--s", default="1/2")
    pn.add_argument("--t", type=float, default=0.3)
    pn.add_argument("--nstates", type=int, default=8)
    pn.add_argument("--convergence", action="store_true",
                    help="also compare against the half-resolution grid")
    common_out(pn)
    pn.set_defaults(func=_cmd_numeric)

    pl = sub.add_parser("localize", help="wave-packet spreading demo")
    pl.add_argument("--m", type=float, default=1.0)
    pl.add_argument("--sigma", type=float, default=0.1)
    pl.add_argument("--y", type=float, default=0.0)
    pl.add_argument("--t", type=float, default=5.0)
    pl.add_argument("--npts", type=int, default=4096)
    pl.add_argument("--pmax", type=float, default=60.0)
    common_out(pl)
    pl.set_defaults(func=_cmd_localize)

    pc = sub.add_parser("causality", help="localized projector commutator")
    pc.add_argument("--m", type=float, default=1.0)
    pc.add_argument("--npts", type=int, default=2048)
    pc.add_argument("--pmax", type=float, default=30.0)
    pc.add_argument("--r", type=float, nargs=2, default=(-2.0, -1.0),
                    metavar=("A", "B"))
    pc.add_argument("--tr", type=float, default=0.0)
    pc.add_argument("--rp", type=float, nargs=2, default=(1.0, 2.0),
                    metavar=("A", "B"))
    pc.add_argument("--trp", type=float, default=1.0)
    common_out(pc)
    pc.set_defaults(func=_cmd_causality)

    pf = sub.add_parser("fock", help="truncated Fock-space checks")
    pf.add_argument("suite", choices=("duality", "expectation", "spectrum"))
    pf.add_argument("--sites", type=int, default=8)
    pf.add_argument("--nmax", type=int, default=3)
    pf.add_argument("--m", type=float, default=1.0)
    common_out(pf)
    pf.set_defaults(func=_cmd_fock)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "fock" and hasattr(args, "tol") and args.tol == 1e-6:
        args.tol = 1e-10     # exact-identity default for the Fock checks
    try:
        return args.func(args)
    except (GridConfigError, ExprSyntaxError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
