"""Verification suites: each returns flat check records and fitted constants.

Every check draws its randomness from ``rng_for(seed, "<suite>.<check>")``, so
checks are independent of each other and of the order they run in.  A check
passes when its residual is at most the threshold, or, for controls that
must *fail* a property (``op == ">"``), when it exceeds the threshold.

Thresholds derive from the four configurable tolerances:

=============  ===================  ============================================
name           value                used for
=============  ===================  ============================================
exact          ``tol_exact``        algebraic identities in floating point
alg            ``tol_alg``          eigen/SVD based and closed-form quantities
lsq            ``100 * tol_alg``    least-squares fits (kappa, Theta, W1 purity)
fd             ``tol_fd``           first finite-difference derivatives
fd2            ``10 * tol_fd``      composed FD quantities (Nijenhuis, nabla^c)
form           ``100 * tol_fd``     FD exterior derivatives of forms
=============  ===================  ============================================
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import clifford as cl
from . import connection as cn
from . import grayhervella as gh
from . import hypersurface as hs
from . import octonion as oc
from . import reductive as rd
from .sampling import rng_for

SUITES = {
    "octonion": "octonion: composition algebra identities, Malcev and non-Lie Jacobi witness",
    "hypersurface": "hypersurface: Calabi lemma, nearly Kaehler S^6, constant type, Einstein metric",
    "connection": "connection: Kirichenko parallel torsion, characteristic torsion, nearly Kaehler forms",
    "reductive": "reductive: G2/SU(3) naturally reductive split and canonical torsion",
    "spinor": "spinor: Grunewald Killing-spinor correspondence on Cl(6) spinors",
    "ghclass": "ghclass: Gray-Hervella classes and the Theta map",
}

ELLIPSOID_AXES = (1.0, 1.3, 0.8, 1.1, 0.9, 1.5, 1.2)


class ConfigError(ValueError):
    pass


class UnknownSuite(ConfigError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "all"
    seed: int = 0
    n_samples: int | None = None  # None: per-check defaults
    tol_exact: float = 1e-12
    tol_alg: float = 1e-10
    tol_fd: float = 1e-6
    fd_step: float = 1e-5
    fmt: str = "text"

    def __post_init__(self):
        if self.suite != "all" and self.suite not in SUITES:
            raise UnknownSuite(f"unknown suite {self.suite!r}; choose from {', '.join([*SUITES, 'all'])}")
        for name in ("tol_exact", "tol_alg", "tol_fd"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if not 1e-9 < self.fd_step < 1e-2:
            raise ConfigError(f"fd_step {self.fd_step:g} outside (1e-9, 1e-2)")
        if self.n_samples is not None and self.n_samples < 2:
            raise ConfigError("samples must be at least 2")
        if self.fmt not in ("text", "json"):
            raise ConfigError(f"unknown format {self.fmt!r}")

    def samples(self, default: int) -> int:
        return default if self.n_samples is None else self.n_samples

    @property
    def thresholds(self) -> dict[str, float]:
        return {
            "exact": self.tol_exact,
            "alg": self.tol_alg,
            "lsq": 100 * self.tol_alg,
            "fd": self.tol_fd,
            "fd2": 10 * self.tol_fd,
            "form": 100 * self.tol_fd,
        }


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    threshold: float
    samples: int = 1
    op: str = "<="

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.residual):
            return False
        if self.op == ">":
            return self.residual > self.threshold
        return self.residual <= self.threshold


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    constants: dict[str, float] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def sorted(self) -> SuiteReport:
        return SuiteReport(
            self.suite,
            sorted(self.checks, key=lambda c: c.name),
            dict(sorted(self.constants.items())),
            self.wall_time,
        )


class _Recorder:
    def __init__(self, suite: str, cfg: SuiteConfig):
        self.report = SuiteReport(suite)
        self.tol = cfg.thresholds

    def check(self, name, residual, tol, samples=1, op="<="):
        thr = self.tol[tol] if isinstance(tol, str) else float(tol)
        self.report.checks.append(Check(name, float(residual), thr, samples, op))

    def const(self, name, value):
        self.report.constants[name] = float(value)


def _tangent_samples(S, rng, n, k):
    """``n`` random points with ``k`` random tangent vectors each."""
    pts = hs.random_points(S, rng, n)
    vecs = rng.standard_normal((n, k, 7))
    return [(p, [hs.tangent_projector(S, p) @ v for v in vs]) for p, vs in zip(pts, vecs)]


# --- suites ------------------------------------------------------------------


def octonion_suite(cfg: SuiteConfig) -> SuiteReport:
    r = _Recorder("octonion", cfg)
    n = cfg.samples(10_000)
    res = oc.identity_suite(cfg.seed, n)
    for key in ("norm_multiplicativity", "conj_reverses_products", "table_vs_cayley_dickson",
                "cross_is_commutator", "malcev", "orthogonal_c", "triple_product"):
        r.check(key, res[key], "exact", n)
    r.const("orthogonal_c_as_printed_residual", res["orthogonal_c_as_printed"])
    e = np.eye(7)
    r.check("jacobi_e1_e2_e4_nonzero", np.linalg.norm(oc.jacobi(e[0], e[1], e[3])), 0.5, op=">")
    r.const("jacobi_e1_e2_e4", np.linalg.norm(oc.jacobi(e[0], e[1], e[3])))
    return r.report


def hypersurface_suite(cfg: SuiteConfig) -> SuiteReport:
    r = _Recorder("hypersurface", cfg)
    h = cfg.fd_step
    S, E = hs.unit_sphere(), hs.ellipsoid(ELLIPSOID_AXES)
    r.const("shape_sign", hs.shape_sign())

    n = cfg.samples(1000)
    rng = rng_for(cfg.seed, "hypersurface.nearly_kaehler")
    worst_nk = worst_fd = worst_acs = 0.0
    for p, (X, Y) in _tangent_samples(S, rng, n, 2):
        worst_nk = max(worst_nk, np.linalg.norm(hs.nablaJ(S, p, X, X, route="fd", h=h)))
        fd = hs.nablaJ(S, p, X, Y, route="fd", h=h)
        worst_fd = max(worst_fd, np.linalg.norm(fd - hs.nablaJ_closed(S, p, X, Y)))
        JX, JY = hs.acs(S, p, X), hs.acs(S, p, Y)
        worst_acs = max(worst_acs, np.linalg.norm(hs.acs(S, p, JX) + X), abs(JX @ JY - X @ Y))
    r.check("sphere_nearly_kaehler_fd", worst_nk, "fd", n)
    r.check("sphere_nablaJ_fd_vs_closed", worst_fd, "fd", n)
    r.check("sphere_acs_orthogonal_complex", worst_acs, "exact", n)

    for label, surf in (("sphere", S), ("ellipsoid", E)):
        m = cfg.samples(200)
        rng = rng_for(cfg.seed, f"hypersurface.calabi_lemma.{label}")
        worst = 0.0
        for p, (X, Y, Z) in _tangent_samples(surf, rng, m, 3):
            lhs = hs.nablaJ(surf, p, X, Y, route="fd", h=h) @ Z
            rhs = oc.cross(hs.shape_operator(surf, p) @ X, Y) @ Z
            worst = max(worst, abs(lhs - rhs))
        r.check(f"calabi_lemma_{label}", worst, "fd", m)

    m = cfg.samples(50)
    rng = rng_for(cfg.seed, "hypersurface.nijenhuis")
    worst = 0.0
    for p, (X, Y) in _tangent_samples(S, rng, m, 2):
        N = hs.nijenhuis(S, p, X, Y, h)
        worst = max(worst, np.linalg.norm(N - 4 * hs.nablaJ_closed(S, p, X, hs.acs(S, p, Y))))
    r.check("sphere_nijenhuis_4_nablaJ", worst, "fd2", m)

    n = cfg.samples(1000)
    alpha = hs.constant_type_alpha(S, cfg.seed, n)
    r.const("alpha", alpha["alpha"])
    r.check("constant_type_alpha_spread", alpha["max_deviation"], 1e-5, alpha["samples"])

    m = cfg.samples(20)
    rng = rng_for(cfg.seed, "hypersurface.curvature")
    ein = ric5 = bianchi = calabi = 0.0
    for p, (X, Y, Z) in _tangent_samples(S, rng, m, 3):
        ein = max(ein, hs.einstein_defect(S, p))
        ric5 = max(ric5, np.abs(hs.ricci(S, p) - 5 * np.eye(6)).max())
        R = lambda a, b, c: hs.curvature_gauss(S, p, a, b, c)  # noqa: E731
        bianchi = max(bianchi, np.linalg.norm(R(X, Y, Z) + R(Y, Z, X) + R(Z, X, Y)))
        calabi = max(calabi, abs(hs.calabi_defect(S, p) - 2 * np.sqrt(6)))
    r.check("sphere_einstein_defect", ein, "alg", m)
    r.check("sphere_ricci_equals_5g", ric5, "alg", m)
    r.check("sphere_first_bianchi", bianchi, "alg", m)
    r.check("sphere_calabi_defect_2sqrt6", calabi, "alg", m)
    rng = rng_for(cfg.seed, "hypersurface.ellipsoid_control")
    q = hs.random_points(E, rng, 1)[0]
    r.check("ellipsoid_einstein_defect_control", hs.einstein_defect(E, q), 1e-3, op=">")
    return r.report


def connection_suite(cfg: SuiteConfig) -> SuiteReport:
    r = _Recorder("connection", cfg)
    h = cfg.fd_step
    S = hs.unit_sphere()

    m = cfg.samples(20)
    rng = rng_for(cfg.seed, "connection.torsion_formulas")
    agree = match = skew = ident = herm = 0.0
    for p in hs.random_points(S, rng, m):
        To, dis = cn.torsion_octonionic(p)
        Tn = cn.torsion_from_nablaJ(S, p)
        raw = np.array([[[hs.nablaJ_closed(S, p, a, hs.acs(S, p, b)) @ c for c in To.frame]
                         for b in To.frame] for a in To.frame])
        J6 = hs.to_frame(To.frame, hs.acs_matrix(S, p))
        agree = max(agree, dis)
        match = max(match, np.abs(To.values - Tn.values).max())
        skew = max(skew, cn.skew_residual(raw))
        ident = max(ident, *cn.torsion_identities(To, J6).values())
        herm = max(herm, cn.hermitian_defect(S, p, To))
    r.check("torsion_octonionic_expressions_agree", agree, "exact", m)
    r.check("torsion_octonionic_vs_nablaJ", match, "fd", m)
    r.check("torsion_total_skew", skew, "fd", m)
    r.check("torsion_J_identities", ident, "alg", m)
    r.check("torsion_hermitian_defect", herm, "alg", m)

    m = cfg.samples(100)
    rng = rng_for(cfg.seed, "connection.nabla_c_J")
    worst = 0.0
    for p, (X, Y) in _tangent_samples(S, rng, m, 2):
        T, _ = cn.torsion_octonionic(p)
        Yf = hs.projected_field(S, Y)
        d = cn.nabla_c(S, p, X, hs.j_field(S, Yf), T, h) - hs.acs(S, p, cn.nabla_c(S, p, X, Yf, T, h))
        worst = max(worst, np.linalg.norm(d))
    r.check("nabla_c_J_zero", worst, "fd2", m)

    m = cfg.samples(100)
    r.check("kirichenko_nabla_c_T", cn.parallel_torsion_check(S, cfg.seed, m, "c", h), "fd2", m)
    r.check("kirichenko_control_nabla_g_T", cn.parallel_torsion_check(S, cfg.seed, m, "g", h), 0.1, m, op=">")

    conv = cn.calibrate_omega(h=h)
    r.const("omega_conjugate", float(conv.conjugate))
    r.const("omega_phase", conv.phase)
    r.const("omega_scale", conv.scale)
    rng = rng_for(cfg.seed, "connection.nk_forms")
    res = [cn.nk_forms_check(p, conv, h) for p in hs.random_points(S, rng, 5)]
    a = np.array([x["a"] for x in res])
    r.const("a", float(a.mean()))
    r.check("nk_forms_a_spread", a.max() - a.min(), "form", 5)
    r.check("nk_forms_dOmega", max(x["residual_dOmega"] for x in res), "form", 5)
    r.check("nk_forms_dImOmega_same_a", max(x["residual_dImOmega"] for x in res), "form", 5)
    return r.report


def reductive_suite(cfg: SuiteConfig) -> SuiteReport:
    r = _Recorder("reductive", cfg)
    g2 = rd.derivation_algebra()
    split = rd.isotropy_split(g2)
    r.check("dim_g2_is_14", abs(g2.dim - 14), 0)
    r.check("dim_h_is_8", abs(split.h_basis.shape[0] - 8), 0)
    r.check("dim_m_is_6", abs(split.m_basis.shape[0] - 6), 0)
    r.check("g2_leibniz", g2.leibniz_residual(), "alg")
    r.check("g2_closure", g2.closure_residual(), "alg")
    r.check("g2_jacobi", g2.jacobi_residual(), "alg")
    r.check("split_invariants", max(rd.split_residuals(split)[k] for k in
                                    ("h_kills_p0", "h_commutes_with_J", "h_bracket_h_in_h", "h_bracket_m_in_m")), "alg")
    n = cfg.samples(1000)
    r.check("natural_reductivity", rd.natural_reductivity_check(split, cfg.seed, n), "alg", n)
    r.check("canonical_torsion_invariant", rd.torsion_invariance_residual(split), "alg")
    fit = rd.canonical_torsion_match(split, cfg.seed, n)
    r.const("kappa", fit["kappa"])
    r.check("canonical_torsion_vs_octonionic", fit["residual"], "lsq", n)
    other = rd.isotropy_split(g2, np.ones(7) / np.sqrt(7))
    fit2 = rd.canonical_torsion_match(other, cfg.seed, n)
    r.check("kappa_anchor_independent", abs(fit2["kappa"] - fit["kappa"]), "alg", n)
    return r.report


def spinor_suite(cfg: SuiteConfig) -> SuiteReport:
    r = _Recorder("spinor", cfg)
    rep = cl.build_cl6()
    g, J = rep.gens, rep.volume
    I8 = np.eye(8, dtype=np.int64)
    r.check("clifford_relations_integer", np.abs(cl.clifford_relations(g)).max(), 0)
    r.check("volume_squares_to_minus_one", np.abs(J @ J + I8).max(), 0)
    r.check("volume_anticommutes", max(np.abs(J @ e + e @ J).max() for e in g), 0)
    r.check("cl7_relations_integer", np.abs(cl.clifford_relations(rep.gens7)).max(), 0)
    r.check("generated_dimension_64", abs(cl.generated_dimension(rep) - 64), 0)

    n = cfg.samples(100)
    rng = rng_for(cfg.seed, "spinor.random_spinors")
    dims = orth = 0.0
    for phi in rng.standard_normal((n, 8)):
        l1, l2, q = cl.spinor_decomposition(rep, phi)
        dims = max(dims, abs(l1.shape[1] - 1) + abs(l2.shape[1] - 1) + abs(q.shape[1] - 6))
        blocks = np.hstack([l1, l2, q])
        dims = max(dims, np.abs(blocks.T @ blocks - np.eye(8)).max())
        Jp = cl.jphi(rep, phi)
        orth = max(orth, np.abs(Jp @ Jp + np.eye(6)).max(), np.abs(Jp.T @ Jp - np.eye(6)).max())
    r.check("spinor_decomposition_1_1_6", dims, "exact", n)
    r.check("jphi_orthogonal_complex", orth, "exact", n)

    phi0 = cl.g2_spinor()
    f = oc.cross_constants()
    r.check("g2_spinor_three_form", np.abs(cl.spinor_three_form_r7(phi0) - f).max(), "alg")

    S = hs.unit_sphere()
    n = cfg.samples(1000)
    rng = rng_for(cfg.seed, "spinor.killing")
    lams, res = [], 0.0
    for (p, (X,)), psi in zip(_tangent_samples(S, rng, n, 1), rng.standard_normal((n, 8))):
        k = cl.killing_check(rep, psi, p, X, S)
        lams.append(k["lambda"])
        res = max(res, k["residual"])
    lams = np.array(lams)
    r.const("lambda", float(lams.mean()))
    r.check("killing_lambda_spread", lams.max() - lams.min(), "alg", n)
    r.check("killing_abs_lambda_half", np.abs(np.abs(lams) - 0.5).max(), "alg", n)
    r.check("killing_equation", res, "alg", n)

    m = cfg.samples(100)
    rng = rng_for(cfg.seed, "spinor.grunewald")
    worst, signs = 0.0, set()
    for p in hs.random_points(S, rng, m):
        s, e = cl.grunewald_match(rep, phi0, S, p)
        signs.add(s)
        worst = max(worst, e)
    r.check("grunewald_jphi_vs_cross", worst, "alg", m)
    r.check("grunewald_sign_constant", len(signs) - 1, 0, m)
    r.const("grunewald_sign", signs.pop() if len(signs) == 1 else 0)

    m = cfg.samples(100)
    rng = rng_for(cfg.seed, "spinor.jphi_nearly_kaehler")
    worst = 0.0
    for (p, (X,)), psi in zip(_tangent_samples(S, rng, m, 1), rng.standard_normal((m, 8))):
        worst = max(worst, cl.jphi_nk_residual(rep, psi, S, p, X, cfg.fd_step))
    r.check("jphi_nearly_kaehler_fd", worst, "fd", m)
    return r.report


def ghclass_suite(cfg: SuiteConfig) -> SuiteReport:
    r = _Recorder("ghclass", cfg)
    S = hs.unit_sphere()
    p0 = np.eye(7)[6]
    t0 = gh.build_A(S, p0)
    sp = gh.gh_spaces(t0.J0)
    r.check("ranks_2_16_12_6", np.abs(np.subtract(sp.ranks, (2, 16, 12, 6))).max(), 0)
    r.check("skew_ranks_2_12_6", np.abs(np.subtract(sp.skew_ranks, (2, 12, 6))).max(), 0)
    r.check("projectors", max(gh.projector_residuals(t0.J0).values()), "exact")
    th = gh.theta_image_report(t0.J0)
    r.check("theta_rank_20", abs(th["rank"] - 20), 0)
    r.check("theta_image_orthogonal_W2", th["image_vs_W2"], "lsq")
    r.check("theta_image_plus_W2_is_36", abs(th["rank_with_W2"] - 36), 0)
    conv = gh.theta_convention()
    r.const("theta_factor", conv.factor)

    m = cfg.samples(10)
    rng = rng_for(cfg.seed, "ghclass.sphere")
    purity = gamma = recover = 0.0
    for p in hs.random_points(S, rng, m):
        t = gh.build_A(S, p)
        purity = max(purity, *gh.gh_project(t).norms[1:])
        To, _ = cn.torsion_octonionic(p, t.frame)
        G = gh.gamma_from_nablaJ(t)
        gamma = max(gamma, np.abs(2 * G - conv.factor * gh.theta_map(To.values, t.J0)).max())
        out = gh.char_connection_exists(t)
        recover = max(recover, np.abs(out["T"] - To.values).max() if out["exists"] else np.inf)
    r.check("sphere_pure_W1", purity, "lsq", m)
    r.check("two_gamma_minus_theta", gamma, "lsq", m)
    r.check("char_connection_recovers_torsion", recover, "fd", m)

    rng = rng_for(cfg.seed, "ghclass.pure_w2")
    W2 = sp.W[1]
    A = (W2 @ (W2.T @ (sp.V @ rng.standard_normal(sp.V.shape[1])))).reshape(6, 6, 6)
    out = gh.char_connection_exists(gh.make_tensor(A, t0.J0))
    r.check("pure_W2_rejected", float(out["exists"]), 0)
    return r.report


_RUNNERS = {
    "octonion": octonion_suite,
    "hypersurface": hypersurface_suite,
    "connection": connection_suite,
    "reductive": reductive_suite,
    "spinor": spinor_suite,
    "ghclass": ghclass_suite,
}


def run_suites(cfg: SuiteConfig) -> list[SuiteReport]:
    names = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    out = []
    for name in sorted(names):
        t = time.perf_counter()
        rep = _RUNNERS[name](cfg).sorted()
        rep.wall_time = time.perf_counter() - t
        out.append(rep)
    return out


def list_suites() -> str:
    lines = [SUITES[k] for k in SUITES]
    lines.append("all: every suite above")
    return "\n".join(lines)


__all__ = ["Check", "ConfigError", "SuiteConfig", "SuiteReport", "UnknownSuite", "list_suites", "run_suites"]
