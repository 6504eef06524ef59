"""End-to-end acceptance gate.

Each test covers one acceptance item, prints exactly one PASS/FAIL line
to the terminal, and pins its tolerances as local constants. The checks
are listed inside each test so a failure names the clause that broke.
"""

import json
import subprocess
import sys
import time

import numpy as np

from woldlab.hardy import compress, double_commutation_defect, shift
from woldlab.linalg import subspace_distance
from woldlab.moments import finite_spectrum_forcing, moment_match
from woldlab.pairs import (biunitary_pair, constant_shift_pair,
                           construct_example, four_block_pair,
                           model_decomposition, slocinski, tensor_shift_pair,
                           three_part_pair, verdict_battery)
from woldlab.symbols import (blaschke, defect_weight, is_inner, polynomial,
                             taylor)
from woldlab.wold import (cnu_eigenvector_span_residual, unitary_part,
                          wold_split)

from oracles import defect_weight_quadrature, unitary_part_stacked

VERDICT_TOL = 1e-8
EXACT_TOL = 1e-10
MOMENT_TOL = 1e-8
FORCING_TOL = 1e-6
KERNEL_SECTION_TOL = 1e-6
QUADRATURE_TOL = 1e-10
TIME_BOX_SECONDS = 60.0


def _emit(capsys, number, ok, label):
    with capsys.disabled():
        print(f"ACCEPTANCE {number:02d}: {'PASS' if ok else 'FAIL'} - {label}")


def _check(checks, ok, detail):
    checks.append((bool(ok), detail))


def _settle(capsys, number, label, checks):
    ok = all(c[0] for c in checks)
    _emit(capsys, number, ok, label)
    for good, detail in checks:
        assert good, detail


def _seeded_poly(rng):
    deg = int(rng.integers(1, 4))
    c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
    grid = np.exp(2j * np.pi * np.arange(512) / 512)
    sup = float(np.max(np.abs(np.polyval(c[::-1], grid))))
    return polynomial(0.9 * c / sup)


def _seeded_blaschke(rng):
    n = int(rng.integers(1, 3))
    zeros = 0.4 * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
    return blaschke(zeros, np.exp(2j * np.pi * rng.random()))


def test_01_residual_formulations_agree_on_twenty_pairs(capsys):
    checks = []
    t0 = time.monotonic()
    rng = np.random.default_rng(2026)
    false_pairs = [construct_example(polynomial([0, 0.5]), 64)]
    false_pairs += [construct_example(_seeded_poly(rng), 64) for _ in range(9)]
    true_pairs = [construct_example(
        _seeded_blaschke(np.random.default_rng(100 + s)), 64)
        for s in range(5)]
    true_pairs.append(three_part_pair(7, degree=64)[0])
    true_pairs.append(three_part_pair(8, degree=64, uu_dim=3)[0])
    true_pairs.append(biunitary_pair(3, 9))
    true_pairs.append(constant_shift_pair(0.77, 64))
    true_pairs.append(tensor_shift_pair(10, 10))
    for i, pair in enumerate(false_pairs):
        rep = verdict_battery(pair)
        votes = {rep.r_i <= VERDICT_TOL, rep.r_ii <= VERDICT_TOL,
                 rep.r_iii <= VERDICT_TOL}
        _check(checks, votes == {False},
               f"false pair {i}: formulations disagree or pass wrongly")
        _check(checks, not rep.verdict, f"false pair {i}: verdict not False")
    for i, pair in enumerate(true_pairs):
        rep = verdict_battery(pair)
        votes = {rep.r_i <= VERDICT_TOL, rep.r_ii <= VERDICT_TOL,
                 rep.r_iii <= VERDICT_TOL}
        _check(checks, votes == {True},
               f"true pair {i}: formulations disagree or fail wrongly")
        _check(checks, rep.verdict, f"true pair {i}: verdict not True")
        worst = max((max(row) if row else 0) for row in rep.r_iv)
        _check(checks, worst <= 2,
               f"true pair {i}: projected span dimension {worst} > 2")
    profile = [row[0] for row in verdict_battery(false_pairs[0]).r_iv]
    _check(checks, all(a < b for a, b in zip(profile, profile[1:])),
           f"span profile not strictly increasing: {profile}")
    elapsed = time.monotonic() - t0
    _check(checks, elapsed <= TIME_BOX_SECONDS,
           f"battery of twenty pairs took {elapsed:.1f}s > 60s")
    _settle(capsys, 1, "residual formulations agree on twenty seeded pairs",
            checks)


def test_02_average_symbol_projected_norm_is_sqrt_half(capsys):
    checks = []
    pair = construct_example(polynomial([0.5, 0.5]), 32)
    rep = verdict_battery(pair)
    _check(checks, abs(rep.r_iii - np.sqrt(0.5)) <= 1e-6,
           f"projected norm {rep.r_iii!r} != sqrt(1/2) within 1e-6")
    _check(checks, pair.defect_2 <= EXACT_TOL,
           f"second operator isometry defect {pair.defect_2:.3e}")
    _check(checks, pair.commutator_residual <= EXACT_TOL,
           f"commutator residual {pair.commutator_residual:.3e}")
    _settle(capsys, 2, "averaging symbol scores sqrt(1/2) at degree 32",
            checks)


def test_03_unitary_part_matches_brute_force_on_hundred(capsys):
    checks = []
    rng = np.random.default_rng(31)
    for i in range(100):
        n = int(rng.integers(1, 7))
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m /= max(np.linalg.svd(m, compute_uv=False)[0], 1.0)
        if i % 4 == 0:
            k = int(rng.integers(1, n + 1))
            q = np.linalg.qr(rng.normal(size=(k, k))
                             + 1j * rng.normal(size=(k, k)))[0]
            m[:k, :k] = q
            m[:k, k:] = 0
            m[k:, :k] = 0
        dec = unitary_part(m)
        oracle = unitary_part_stacked(m)
        _check(checks, dec.unitary_part.dim == oracle.dim,
               f"contraction {i}: dim {dec.unitary_part.dim} != {oracle.dim}")
        if dec.unitary_part.dim == oracle.dim and oracle.dim:
            d = subspace_distance(dec.unitary_part, oracle)
            _check(checks, d <= 1e-8, f"contraction {i}: distance {d:.3e}")
    witness = unitary_part(np.array([[0.5]]))
    _check(checks, witness.unitary_part.dim == 0,
           "scalar 0.5 should have no unitary part")
    from woldlab.wold import hyper_range
    _check(checks, hyper_range(np.array([[0.5]])).dim == 1,
           "scalar 0.5 should keep a full hyper-range")
    _settle(capsys, 3, "unitary part matches brute force on 100 contractions",
            checks)


def test_04_wold_ladders_complete_and_sections_span(capsys):
    from woldlab.cli import _shift_plus_unitary

    checks = []
    for k in (0, 1, 3):
        op = _shift_plus_unitary(16, k, seed=5)
        dec = wold_split(op, 18)
        _check(checks, dec.completeness_residual <= EXACT_TOL,
               f"k={k}: completeness {dec.completeness_residual:.3e}")
        _check(checks, dec.ladder_orthogonality <= EXACT_TOL,
               f"k={k}: ladder orthogonality {dec.ladder_orthogonality:.3e}")
        _check(checks, dec.hyper_range.dim == k,
               f"k={k}: residual dim {dec.hyper_range.dim}")
    grid = [0.5 * np.exp(2j * np.pi * j / 12) for j in range(12)]
    resid = cnu_eigenvector_span_residual(compress(shift(1, 24)), grid)
    _check(checks, resid <= KERNEL_SECTION_TOL,
           f"kernel sections leak {resid:.3e} at degree 24")
    _settle(capsys, 4, "wandering ladders complete and kernel sections span",
            checks)


def test_05_three_part_assemblies_recover_exactly(capsys):
    checks = []
    for seed in range(10):
        uu = seed % 3 + 1
        pair, truth = three_part_pair(seed, uu_dim=uu)
        md = model_decomposition(pair)
        _check(checks, md.h_uu.dim == uu,
               f"seed {seed}: bi-unitary dim {md.h_uu.dim} != {uu}")
        _check(checks, md.f_dim == 1 and md.e_dim == 1,
               f"seed {seed}: fiber dims ({md.f_dim}, {md.e_dim}) != (1, 1)")
        _check(checks, md.reconstruction_residual <= VERDICT_TOL,
               f"seed {seed}: reconstruction {md.reconstruction_residual:.3e}")
        _check(checks, abs(md.psi[0, 0] - truth["psi"]) <= VERDICT_TOL,
               f"seed {seed}: constant factor off")
        want = taylor(truth["phi"], md.phi_coeffs.shape[0] - 1)[:, 0, 0]
        got = md.phi_coeffs[:, 0, 0]
        gap = float(np.max(np.abs(np.abs(got) - np.abs(want))))
        _check(checks, gap <= VERDICT_TOL,
               f"seed {seed}: recovered coefficients off by {gap:.3e}")
    _settle(capsys, 5, "ten scrambled three-part sums recover exactly",
            checks)


def test_06_four_part_split_dims_exact(capsys):
    checks = []
    dec_t = slocinski(tensor_shift_pair(5, 5))
    _check(checks, dec_t.dims == {"uu": 0, "us": 0, "su": 0, "ss": 36},
           f"tensor dims {dec_t.dims}")
    _check(checks, dec_t.orthogonality_residual <= VERDICT_TOL,
           f"tensor orthogonality {dec_t.orthogonality_residual:.3e}")
    _check(checks, dec_t.reduction_residual <= VERDICT_TOL,
           f"tensor reduction {dec_t.reduction_residual:.3e}")
    for seed in (2, 3):
        pair, expected = four_block_pair(seed)
        dec = slocinski(pair)
        _check(checks, dec.dims == expected,
               f"seed {seed}: dims {dec.dims} != {expected}")
        _check(checks, dec.orthogonality_residual <= VERDICT_TOL,
               f"seed {seed}: orthogonality {dec.orthogonality_residual:.3e}")
        _check(checks, dec.reduction_residual <= VERDICT_TOL,
               f"seed {seed}: reduction {dec.reduction_residual:.3e}")
    _settle(capsys, 6, "four-part splits have exact dims and tight residuals",
            checks)


def test_07_boundary_moments_match_weight_coefficients(capsys):
    checks = []
    symbols = {
        "half-shift": polynomial([0, 0.5]),
        "average": polynomial([0.5, 0.5]),
        "blaschke-half": blaschke([0.5]),
    }
    for name, sym in symbols.items():
        asm = construct_example(sym, 32).assembly
        _, _, err = moment_match(asm.v_hat, asm.b1, sym, 12)
        _check(checks, err <= MOMENT_TOL,
               f"{name}: worst moment deviation {err:.3e}")
    _settle(capsys, 7, "boundary moments match weight coefficients to 1e-8",
            checks)


def test_08_four_atoms_cannot_carry_average_weight(capsys):
    checks = []
    atoms = np.exp(2j * np.pi * np.arange(4) / 4)
    rep = finite_spectrum_forcing(None, polynomial([0.5, 0.5]), 12,
                                  tol=FORCING_TOL, atoms=atoms)
    _check(checks, rep.residual > 10 * FORCING_TOL,
           f"four-atom residual {rep.residual:.3e} not clearly positive")
    _check(checks, rep.forced_trivial, "forcing verdict should be True")
    rep_i = finite_spectrum_forcing(None, blaschke([0.5]), 12,
                                    tol=FORCING_TOL, atoms=atoms)
    _check(checks, rep_i.residual <= 1e-12,
           f"inner residual {rep_i.residual:.3e} should vanish")
    _check(checks, not rep_i.forced_trivial,
           "inner symbol should not force anything")
    _settle(capsys, 8, "four atoms cannot carry the averaging weight",
            checks)


def test_09_weights_match_quadrature_and_flatness_shows(capsys):
    checks = []
    rng = np.random.default_rng(2027)
    for i in range(10):
        sym = _seeded_poly(rng)
        gap = float(np.max(np.abs(defect_weight(sym, 12).values
                                  - defect_weight_quadrature(sym, 12))))
        _check(checks, gap <= QUADRATURE_TOL,
               f"poly {i}: weight vs quadrature gap {gap:.3e}")
        flagged, defect = is_inner(sym)
        _check(checks, not flagged and defect > QUADRATURE_TOL,
               f"poly {i}: wrongly flagged inner (defect {defect:.3e})")
        dc = double_commutation_defect(sym, 16)
        _check(checks, dc > 0.1,
               f"poly {i}: adjoint-commutation defect {dc:.3e} too small")
    const = polynomial([np.exp(0.3j)])
    _check(checks, double_commutation_defect(const, 16) <= QUADRATURE_TOL,
           "constant symbol should doubly commute")
    flagged_c, defect_c = is_inner(const)
    _check(checks, flagged_c and defect_c <= QUADRATURE_TOL,
           "unimodular constant should be inner")
    _settle(capsys, 9, "defect weights match quadrature; flat symbols differ",
            checks)


def test_10_cli_reports_are_reproducible_with_honest_exits(capsys, tmp_path):
    checks = []
    half = {"symbol": {"kind": "polynomial",
                       "coeffs": [[0.0, 0.0], [0.5, 0.0]]}}

    def invoke(command, config, out_name, *extra):
        cfg = tmp_path / f"{out_name}.json"
        cfg.write_text(json.dumps(config))
        out = tmp_path / out_name
        proc = subprocess.run(
            [sys.executable, "-m", "woldlab", command,
             "--config", str(cfg), "--out", str(out), *extra],
            capture_output=True, text=True)
        return proc.returncode, out

    codes = set()
    code, _ = invoke("wold", {}, "w")
    codes.add(code)
    _check(checks, code == 0, f"wold exit {code} != 0")
    code, _ = invoke("verdict", half, "v")
    codes.add(code)
    _check(checks, code == 2, f"verdict exit {code} != 2")
    code, _ = invoke("model-decompose", half, "m")
    codes.add(code)
    _check(checks, code == 1, f"model-decompose exit {code} != 1")
    _check(checks, codes == {0, 1, 2}, f"exit codes seen: {sorted(codes)}")
    code1, out1 = invoke("moments", half, "g1", "--csv")
    code2, out2 = invoke("moments", half, "g2", "--csv")
    _check(checks, code1 == 0 and code2 == 0, "moments runs should succeed")

    def stripped(out):
        lines = (out / "report.json").read_bytes().splitlines(keepends=True)
        return b"".join(ln for ln in lines if b"wall_time_seconds" not in ln)

    _check(checks, stripped(out1) == stripped(out2),
           "reports differ beyond wall time")
    _check(checks,
           (out1 / "moments.csv").read_bytes()
           == (out2 / "moments.csv").read_bytes(),
           "moment series differ between runs")
    _check(checks,
           (out1 / "boundary.csv").read_bytes()
           == (out2 / "boundary.csv").read_bytes(),
           "boundary series differ between runs")
    _settle(capsys, 10, "command line reproduces reports byte for byte",
            checks)
