"""Acceptance criteria 1-9, one PASS/FAIL line each (shown in the terminal summary)."""
import numpy as np
import pytest

from mchrh import direct_scattering as ds
from mchrh import reconstruction as rc
from mchrh import verification as vf
from mchrh.cli import main
from mchrh.soliton_rh import (
    ReflectionlessData,
    SolitonParams,
    one_soliton_eval,
    one_soliton_matrix,
    reflectionless_solve,
    solve_reflectionless,
    z_of,
)

THETAS = [np.pi / 6, np.pi / 4, np.pi / 3, 0.4 * np.pi]
TIMES = [0.0, 1.0]
Y = np.linspace(-40, 40, 2001)


def random_mu(n=100, seed=0):
    rng = np.random.default_rng(seed)
    return rng.normal(size=n) + 1j * rng.normal(size=n)


def sup(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def test_criterion_1_closed_form_consistency(acceptance_report):
    worst, where, rel = 0.0, "", 0.0
    for th in THETAS:
        p = SolitonParams(th, 1.0)
        for t in TIMES:
            closed = rc.closed_form_fields(p, Y, t)
            u2, ux2, m2, off = rc.recover_fields(one_soliton_eval(p, Y, t))
            for name, a, b in zip(("u", "u_x", "m", "x"), closed, (u2, ux2, m2, Y + off)):
                d = sup(a, b)
                rel = max(rel, float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a)))))
                if d > worst:
                    worst, where = d, f"{name} at theta={th / np.pi:.3g}pi, t={t:g}"
    ok = acceptance_report(1, worst <= 1e-10, f"two-route sup difference {worst:.2e} (tol 1e-10), "
                                              f"worst {where}; max relative {rel:.1e}")
    assert ok


def test_criterion_2_pi_over_3(acceptance_report):
    p = SolitonParams(np.pi / 3, 1.0)
    worst = 0.0
    for t in TIMES:
        z = z_of(p, Y, t)
        fsmooth = 48 * z * (4 * z * z + 2 * z + 1) / (4 * z * z + 8 * z + 1) ** 2
        worst = max(worst, sup(rc.closed_form_fields(p, Y, t)[0], fsmooth))
    ev = one_soliton_eval(p, 0.0, 0.0, z=0.5)
    crest = abs(float(-ev.a2 * ev.a1 - ev.a3 / ev.a1) - 2.0)
    ok = acceptance_report(2, worst <= 1e-12 and crest <= 1e-12,
                           f"fsmooth defect {worst:.2e}, crest |u-2| {crest:.2e} (tol 1e-12)")
    assert ok


def test_criterion_3_pde_residuals(acceptance_report):
    pde_y = cons = 0.0
    for th in THETAS:
        src = vf.soliton_source(SolitonParams(th, 1.0))
        for t in TIMES:
            pde_y = max(pde_y, vf.pde_residual_y(src, Y, t, 1e-4).max_residual)
            cons = max(cons, vf.constitutive_residual(src, Y, t, 1e-4).max_residual)
    x = np.arange(-30.0, 30.0, 1e-3)
    pde_x = max(vf.soliton_pde_x(SolitonParams(th, 1.0), t, x, 1e-3).max_residual
                for th in THETAS if th < np.pi / 3 for t in TIMES)
    ok = acceptance_report(3, pde_y <= 1e-7 and cons <= 1e-6 and pde_x <= 1e-4,
                           f"pde_y {pde_y:.2e} (1e-7), constitutive {cons:.2e} (1e-6), pde_x {pde_x:.2e} (1e-4)")
    assert ok


def test_criterion_4_rh_invariants(acceptance_report):
    mus = random_mu(100, seed=4)
    worst = {}
    p = SolitonParams(np.pi / 4, 1.0)
    one = ReflectionlessData.one_soliton(p)
    two = ReflectionlessData.from_generators([
        (np.exp(1j * np.pi / 6), 1j * np.exp(-1j * np.pi / 6)),
        (np.exp(1j * np.pi / 4), 1j * np.exp(-1j * np.pi / 4)),
    ])
    for y, t in [(0.0, 0.0), (-3.0, 0.5), (2.5, 1.0)]:
        for data, M in ((one, one_soliton_matrix(p, y, t)), (two, solve_reflectionless(two, y, t))):
            reps = vf.rh_invariant_suite(M, mus)
            reps += [vf.residue_check(M, data, y, t), vf.singularity_check(M, M.alpha)]
            for r in reps:
                worst[r.name] = max(worst.get(r.name, 0.0), r.max_residual)
    top = max(worst.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    ok = acceptance_report(4, top <= 1e-9, f"max {top:.2e} (tol 1e-9): {detail}")
    assert ok


def test_criterion_5_reflectionless_oracle(acceptance_report):
    rng = np.random.default_rng(5)
    p = SolitonParams(np.pi / 4, 1.0)
    data = ReflectionlessData.one_soliton(p)
    worst = 0.0
    for y, t in zip(rng.uniform(-20, 20, 50), rng.uniform(0, 2, 50)):
        a = rc.recover_fields(reflectionless_solve(data, y, t))
        b = rc.recover_fields(one_soliton_eval(p, y, t))
        worst = max(worst, max(abs(float(u) - float(v)) for u, v in zip(a, b)))
    ok = acceptance_report(5, worst <= 1e-10, f"field difference {worst:.2e} over 50 (y,t) (tol 1e-10)")
    assert ok


def test_criterion_6_direct_scattering(acceptance_report, gaussian_profile, gaussian_data):
    prof, data = gaussian_profile, gaussian_data
    unit = data.unitarity_defect()
    mu = data.mu_grid
    pos = mu > 0
    # a(-mu) = conj a(mu) and a(1/mu) = conj a(mu) on the real line
    a_of = dict(zip(np.round(mu, 12), data.a_vals))
    sym = 0.0
    for m, a in zip(mu[pos], data.a_vals[pos]):
        sym = max(sym, abs(a_of[np.round(-m, 12)] - np.conj(a)))
        inv = ds.scattering_ab(prof, 1 / m)[0]
        sym = max(sym, abs(inv - np.conj(a)))
    a_far = ds.scattering_ab_grid(prof, [-50.0, 50.0])[0]
    far = float(np.max(np.abs(a_far - 1)))
    a1, b1 = ds.scattering_ab_grid(prof, mu, x_match=-1.5)
    a2, b2 = ds.scattering_ab_grid(prof, mu, x_match=2.0)
    match = max(sup(a1, a2), sup(b1, b2))
    ok = unit <= 1e-6 and sym <= 1e-8 and far <= 1e-3 and match <= 1e-8
    acceptance_report(6, ok, f"unitarity {unit:.2e} (1e-6), symmetry {sym:.2e} (1e-8), "
                             f"|a(+-50)-1| {far:.2e} (1e-3), matching point {match:.2e} (1e-8)")
    assert ok


def test_criterion_7_ist_round_trip(acceptance_report, soliton_data):
    data = soliton_data
    targets = [np.exp(1j * np.pi / 4), -np.exp(-1j * np.pi / 4)]
    zeros = [m for m, _ in data.zeros]
    zerr = max(min(abs(z - w) for z in zeros) for w in targets) if len(zeros) == 2 else np.inf
    bmax = float(np.max(np.abs(data.b_vals)))
    rho1 = dict(data.zeros)[min(zeros, key=lambda z: abs(z - targets[0]))]
    rerr = abs(rho1 - 1j * np.exp(-1j * np.pi / 4))
    rl = data.reflectionless_data()
    y = np.linspace(-30, 30, 601)
    back = rc.profile_from_reflectionless(rl, 0.0, y)
    ref = rc.soliton_profile(SolitonParams(np.pi / 4, 1.0), 0.0, y)
    prof_err = max(sup(back.u_hat, ref.u_hat), sup(back.x_of_y, ref.x_of_y))
    ok = zerr <= 1e-4 and bmax <= 1e-4 and data.c == 1 and rerr <= 1e-3 and prof_err <= 1e-3
    acceptance_report(7, ok, f"poles {zerr:.2e} (1e-4), |b| {bmax:.2e} (1e-4), c={data.c:g}, "
                             f"rho1 {rerr:.2e} (1e-3), profile {prof_err:.2e} (1e-3)")
    assert ok


def test_criterion_8_classification(acceptance_report):
    expect = {(np.pi / 6, 1): rc.SMOOTH, (np.pi / 3, 1): rc.FINITE, (0.4 * np.pi, 1): rc.LOOP,
              (np.pi / 6, -1): rc.SINGULAR, (np.pi / 3, -1): rc.SINGULAR, (0.4 * np.pi, -1): rc.SINGULAR}
    cls_ok = all(rc.classify(SolitonParams(*k)) == v for k, v in expect.items())
    sol = rc.soliton_profile(SolitonParams(0.4 * np.pi, 1.0), 0.0, Y)
    try:
        rc.resample_to_x(sol, np.linspace(-5, 5, 11))
        intervals = 1
    except rc.NonMonotoneError as exc:
        intervals = exc.intervals
    blowup = rc.blowup_detected(SolitonParams(np.pi / 3, 1.0))
    ok = cls_ok and intervals == 3 and blowup
    acceptance_report(8, ok, f"classification {'ok' if cls_ok else 'wrong'}, "
                             f"0.4pi intervals {intervals}, crest blow-up detected {blowup}")
    assert ok


def _cli_outputs(root, capsys):
    root.mkdir()
    x = np.linspace(-12, 12, 1024)
    prof = ds.profile_from_u(x, 0.3 * np.exp(-x * x))
    (root / "g.csv").write_text(prof.to_csv())
    runs = [
        ["soliton", "--theta", "pi/3", "--delta", "1", "--t", "0,1", "--x", "-10:10:401", "--out", str(root)],
        ["scatter", "--profile", str(root / "g.csv"), "--out", str(root / "g.json"), "--no-zeros"],
        ["verify", "--theta", "pi/4", "--checks", "pde_y,constitutive,rel,rh", "--out", str(root / "v.jsonl")],
        ["orbit", "0.5,1.7"],
    ]
    stdout = []
    for argv in runs:
        main(argv)
        stdout.append(capsys.readouterr().out.replace(str(root), "<root>"))
    files = {p.name: p.read_bytes() for p in sorted(root.iterdir())}
    return files, stdout


def test_criterion_9_determinism(acceptance_report, tmp_path, capsys):
    f1, s1 = _cli_outputs(tmp_path / "a", capsys)
    f2, s2 = _cli_outputs(tmp_path / "b", capsys)
    ok = f1 == f2 and s1 == s2 and len(f1) >= 6
    acceptance_report(9, ok, f"{len(f1)} files and {len(s1)} stdout streams byte-identical: {ok}")
    assert ok
