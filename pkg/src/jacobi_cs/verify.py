"""Invariant suites behind ``jacobi-cs verify``.

Each suite returns a list of :class:`Check` records. Suites are independent
and run concurrently; the report is assembled in a fixed order so identical
configurations give byte-identical JSON.
"""
from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import algebra as alg
from . import coords, diffops, dynamics, fock, kernel, transforms
from ._util import thread_cap
from .config import RunConfig
from .errors import ConvergenceWarning

SUITE_NAMES = ("algebra", "kernel", "diffops", "fock", "dynamics", "coords")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    relation: str
    residual: float
    tol: float
    passed: bool


def _check(suite, name, relation, residual, tol) -> Check:
    residual = float(residual)
    return Check(suite, name, relation, residual, float(tol), bool(residual <= tol))


# --------------------------------------------------------------------------
# random data
# --------------------------------------------------------------------------

def random_point(rng: np.random.Generator, zmax: float = 1.0, wmax: float = 0.5) -> alg.JacobiCSPoint:
    """Uniform in the product of the discs |z| <= zmax, |w| <= wmax."""
    z = zmax * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
    w = wmax * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
    return alg.JacobiCSPoint(complex(z), complex(w))


def random_su11(rng: np.random.Generator, rmax: float = 1.0) -> alg.SU11Matrix:
    z = rmax * rng.uniform() * np.exp(2j * math.pi * rng.uniform())
    return alg.su11_exp(complex(z), float(rng.uniform(-math.pi, math.pi)))


def random_element(rng: np.random.Generator, rmax: float = 1.0, amax: float = 1.0) -> alg.JacobiElement:
    alpha = complex(*rng.uniform(-amax, amax, 2))
    return alg.JacobiElement(random_su11(rng, rmax), alpha, float(rng.uniform(-math.pi, math.pi)))


def _random_disk(rng: np.random.Generator, r: float) -> complex:
    return complex(r * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform()))


def random_hamiltonian(rng: np.random.Generator, scale: float = 1.0) -> dynamics.HamiltonianCoeffs:
    """Hermitian coefficients with |eps_a|, |eps_+| <= scale and |eps_0| <= scale.

    Hyperbolic flows bring 1 - |w|^2 down like exp(-2 scale t); scale = 1 keeps
    it above 1e-9 over t <= 10, inside double resolution.
    """
    return dynamics.HamiltonianCoeffs(_random_disk(rng, scale), float(rng.uniform(-scale, scale)),
                                      _random_disk(rng, scale))


def random_sl2(rng: np.random.Generator) -> coords.SL2Matrix:
    x, y, t = rng.uniform(-2, 2), rng.uniform(0.3, 3), rng.uniform(-math.pi, math.pi)
    return coords.iwasawa_reassemble(x, y, t)


def random_upper(rng: np.random.Generator) -> coords.UpperHalfPoint:
    return coords.UpperHalfPoint(complex(rng.uniform(-2, 2), rng.uniform(0.3, 3)), complex(*rng.uniform(-2, 2, 2)))


# --------------------------------------------------------------------------
# suites
# --------------------------------------------------------------------------

def suite_algebra(cfg: RunConfig) -> list[Check]:
    rng = np.random.default_rng([cfg.seed, 1])
    k, tol = cfg.k, cfg.tol
    n = 50
    integral = alg.Weight(k, cfg.mode).two_k_integer
    assoc = inv = act = cyc = alt = chain = 0.0
    for _ in range(n):
        h1, h2, h3 = (random_element(rng) for _ in range(3))
        x = random_point(rng)
        a = alg.compose(alg.compose(h1, h2), h3)
        b = alg.compose(h1, alg.compose(h2, h3))
        assoc = max(assoc, abs(a.alpha - b.alpha), abs(a.t - b.t), np.max(np.abs(a.g.as_array() - b.g.as_array())))
        e = alg.compose(h1, alg.inverse(h1))
        inv = max(inv, abs(e.alpha), abs(e.t), np.max(np.abs(e.g.as_array() - np.eye(2))))
        p = alg.jacobi_act(h1, alg.jacobi_act(h2, x))
        q = alg.jacobi_act(alg.compose(h1, h2), x)
        act = max(act, abs(p.z - q.z), abs(p.w - q.w))
        lam = alg.cocycle(h1, x, k)
        alt = max(alt, abs(lam - alg.cocycle_alt(h1, x, k)) / abs(lam),
                  abs(lam - alg.cocycle_alt(h1, x, k, form="square")) / abs(lam))
        chain = max(chain, abs(lam - transforms.cocycle_via_chain(h1, x, k)[0]) / abs(lam))
        if integral:
            m12 = alg.multiplier(alg.compose(h1, h2), x, k)
            m1m2 = alg.multiplier(h1, alg.jacobi_act(h2, x), k) * alg.multiplier(h2, x, k)
            cyc = max(cyc, abs(m12 - m1m2) / abs(m12))
    rap = 0.0
    for _ in range(n):
        z = complex(*rng.uniform(-3, 3, 2))
        rap = max(rap, abs(alg.z_of_w(alg.w_of_z(z)) - z))
    return [
        _check("algebra", "compose_associative", "group law (g1 g2, g2^-1 a1 + a2, ...)", assoc, tol.group),
        _check("algebra", "inverse", "h h^-1 = identity", inv, tol.group),
        _check("algebra", "left_action", "h1.(h2.x) = (h1 h2).x", act, tol.group),
        _check("algebra", "cocycle_forms", "multiplier: auxiliary-label form vs exponent form", alt, tol.cocycle),
        _check("algebra", "cocycle_chain", "multiplier: closed form vs step-by-step reordering", chain, tol.cocycle),
        _check("algebra", "cocycle_identity", "m(h1 h2, x) = m(h1, h2.x) m(h2, x)", cyc, tol.cocycle),
        _check("algebra", "rapidity_roundtrip", "z -> w -> z for |z| <= 3", rap, tol.group),
    ]


def suite_kernel(cfg: RunConfig) -> list[Check]:
    rng = np.random.default_rng([cfg.seed, 2])
    k, tol = cfg.k, cfg.tol
    trunc = 0.0
    for _ in range(50):
        x, y = random_point(rng), random_point(rng)
        c = kernel.kernel_closed(x, y, k)
        trunc = max(trunc, abs(c - kernel.kernel_truncated(x, y, k, cfg.cutoff_n, cfg.cutoff_m)) / abs(c))
    psd = 0.0
    for _ in range(50):
        ev = np.linalg.eigvalsh(kernel.kernel_matrix([random_point(rng) for _ in range(6)], k))
        psd = max(psd, -ev.min() / ev.max())
    transf = metric = det = 0.0
    for _ in range(20):
        x, h = random_point(rng), random_element(rng)
        transf = max(transf, kernel.kahler_transform_residual(h, x, k))
        an = kernel.kahler_potential_and_metric(x, k)[1]
        fd = kernel.metric_finite_difference(x, k)
        metric = max(metric, np.max(np.abs(an.as_matrix() - fd.as_matrix())))
        det = max(det, abs(an.det * (1 - abs(x.w) ** 2) ** 3 - 2 * float(k)) / (2 * float(k)))
    mehler = 0.0
    for _ in range(10):
        a, b = complex(*rng.uniform(-1, 1, 2)), complex(*rng.uniform(-1, 1, 2))
        s = complex(0.5 * rng.uniform() * np.exp(2j * math.pi * rng.uniform()))
        ref = kernel.mehler_closed(a, b, s)
        mehler = max(mehler, abs(kernel.mehler_sum(a, b, s) - ref) / abs(ref))
    return [
        _check("kernel", "truncation", f"kernel: series to N={cfg.cutoff_n}, M={cfg.cutoff_m} vs closed form",
               trunc, tol.kernel),
        _check("kernel", "positive_definite", "Gram matrices on 6 points: -min eig / max eig", psd, 1e-10),
        _check("kernel", "transformation_rule", "K(h.x; conj(h.x)) |lambda|^2 = K(x; conj(x))", transf, tol.kernel),
        _check("kernel", "metric_fd", "metric components vs Hessian of log K", metric, tol.metric_fd),
        _check("kernel", "metric_det", "det G (1-|w|^2)^3 = 2k", det, tol.group),
        _check("kernel", "mehler", "Hermite bilinear sum vs closed form", mehler, tol.kernel),
    ]


def suite_diffops(cfg: RunConfig) -> list[Check]:
    k, tol = cfg.k, cfg.tol
    exact = k if isinstance(k, Fraction) else Fraction(k)
    sym = sum(not r["zero"] for r in diffops.check_commutation_table(None))
    num = sum(not r["zero"] for r in diffops.check_commutation_table(exact))
    jac = sum(not ok for *_, ok in diffops.jacobi_identity_residuals(None))
    rng = np.random.default_rng([cfg.seed, 3])
    adj = 0.0
    for name in ("a", "a+", "K0", "K+", "K-"):
        for _ in range(5):
            adj = max(adj, diffops.adjoint_kernel_check(name, random_point(rng), random_point(rng), k))
    return [
        _check("diffops", "commutation_symbolic", "commutation table, symbolic k: nonzero residuals", sym, 0),
        _check("diffops", "commutation_exact_k", f"commutation table at k={exact}: nonzero residuals", num, 0),
        _check("diffops", "jacobi_identity", "Jacobi identity over generator triples: failures", jac, 0),
        _check("diffops", "adjoint_kernel", "D_X on x-slot of K equals D_X+ on conj(y)-slot", adj, tol.kernel),
    ]


def suite_fock(cfg: RunConfig) -> list[Check]:
    rng = np.random.default_rng([cfg.seed, 4])
    k, tol = cfg.k, cfg.tol
    N, M = min(cfg.cutoff_n, 40), min(cfg.cutoff_m, 40)
    rep = fock.build_rep(N, M, k)
    comm64 = max(r["max_residual"] for r in fock.commutator_table_check(rep))
    comm = max(r["max_residual"] for r in fock.commutator_table_check(fock.build_rep(N, M, k, dtype=np.longdouble)))
    ov = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        for _ in range(10):
            x, y = random_point(rng), random_point(rng)
            c = kernel.kernel_closed(x, y, k)
            ov = max(ov, abs(fock.overlap(fock.cs_vector(y, rep), fock.cs_vector(x, rep)) - c) / abs(c))
    lim = min(8, N // 2, M)
    app = 0.0
    for n in range(lim + 1):
        for m in range(lim + 1):
            got, ref = np.array(fock.appendix_moments(n, m, rep)), np.array(fock.appendix_closed(n, m, k))
            app = max(app, np.max(np.abs(got - ref) / np.maximum(1, np.abs(ref))))
    bog = 0.0
    for _ in range(3):
        z = complex(rng.uniform() * np.exp(2j * math.pi * rng.uniform()))
        bog = max(bog, fock.bogoliubov_oracle(z, k=k).residual)
    small = fock.build_rep(30, 30, k)
    act = 0.0
    for _ in range(3):
        z = complex(0.4 * rng.uniform() * np.exp(2j * math.pi * rng.uniform()))
        x = random_point(rng, 0.5, 0.3)
        act = max(act, fock.action_oracle(small, z, float(rng.uniform(-1, 1)), complex(*rng.uniform(-.4, .4, 2)), x)[0])
    return [
        _check("fock", "commutators", f"matrix commutation table on interior block (N={N}, M={M})", comm, tol.commutator),
        _check("fock", "commutators_float64", "same table with float64 entries (rounding of the ladder square roots)",
               comm64, 1e-11),
        _check("fock", "overlap", "(e_y, e_x) from coefficient arrays vs closed kernel", ov, 1e-6),
        _check("fock", "vacuum_moments", f"(e0, a^n a+^m e0) = n! delta and (e0, K-^n K+^m e0) for n, m <= {lim}",
               app, tol.commutator),
        _check("fock", "bogoliubov", "S^-1 a S = a_g a + b_g a+ by matrix exponential", bog, tol.fock),
        _check("fock", "action", "S(g) D(alpha) e_x = lambda e_{h.x} on the low block", act, tol.fock),
    ]


def suite_dynamics(cfg: RunConfig) -> list[Check]:
    rng = np.random.default_rng([cfg.seed, 5])
    k, tol = cfg.k, cfg.tol
    x0 = alg.JacobiCSPoint(0.3 + 0.1j, 0.4 - 0.2j)
    tr = dynamics.integrate_flow(x0, dynamics.HamiltonianCoeffs(eps_0=1.3), (0, 10), dt=1e-2)
    rot = float(np.max(np.abs(np.abs(tr.w) - abs(x0.w))))
    eps = 0.7
    tr = dynamics.integrate_flow((0, 0), dynamics.HamiltonianCoeffs(eps_plus=eps), (0, 5), dt=1e-2)
    tanh = float(np.max(np.abs(tr.w + 1j * np.tanh(eps * tr.t))))
    exits = 0
    for _ in range(10):
        t = dynamics.integrate_flow(random_point(rng, 1, 0.9), random_hamiltonian(rng), (0, 10), dt=1e-2)
        exits += t.event is not None or t.max_abs_w >= 1
    ric = 0.0
    for _ in range(10):
        H = dynamics.HamiltonianCoeffs(complex(*rng.normal(size=2)), rng.normal(), complex(*rng.normal(size=2)),
                                       eps_minus=complex(*rng.normal(size=2)),
                                       eps_adag=complex(*rng.normal(size=2)), hermitian=False)
        x = random_point(rng)
        ric = max(ric, np.max(np.abs(np.subtract(dynamics.riccati_rhs(x, H),
                                                 dynamics.riccati_rhs_from_generators(x, H)))))
    geo = 0.0
    for _ in range(10):
        x, v = random_point(rng), (complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
        a = np.array(dynamics.geodesic_rhs(x, v, k))
        geo = max(geo, np.max(np.abs(a - dynamics.geodesic_rhs_fd(x, v, k))) / max(1, np.max(np.abs(a))))
    g = dynamics.integrate_geodesic((0.2, 0.1j), (0.3, 0.2 - 0.1j), k, (0, 5), dt=1e-2)
    return [
        _check("dynamics", "rotation", "eps0-only flow keeps |w| fixed over t in [0, 10]", rot, tol.dynamics),
        _check("dynamics", "tanh", "eps+ = eps- real flow from w=0 is -i tanh(eps t)", tanh, 1e-7),
        _check("dynamics", "disk_invariance", "hermitian flows leaving the disk (count)", exits, 0),
        _check("dynamics", "riccati_assembly", "velocity vs vector fields of the generators", ric, tol.commutator),
        _check("dynamics", "geodesic_rhs", "geodesic equations vs finite-difference Christoffel symbols",
               geo, tol.christoffel_fd),
        _check("dynamics", "speed_drift", "relative drift of metric speed over t in [0, 5]",
               g.extra["speed_drift"], 1e-6),
    ]


def suite_coords(cfg: RunConfig) -> list[Check]:
    rng = np.random.default_rng([cfg.seed, 6])
    k, tol = cfg.k, cfg.tol
    rt = pull = ez = iwa = square = hom = 0.0
    for _ in range(20):
        p = random_upper(rng)
        q = coords.to_upper(coords.to_disk(p))
        rt = max(rt, abs(q.v - p.v), abs(q.u - p.u))
        ref = coords.berndt_form_at(p, k).as_matrix()
        pull = max(pull, np.max(np.abs(coords.pullback_metric(p, k) - ref)) / np.max(np.abs(ref)))
        c = coords.ez_from_point(p)
        gm = coords.ez_metric(c, k)
        ez = max(ez, np.max(np.abs(coords.ez_metric_pullback(c, k) - gm)) / np.max(np.abs(gm)))
        M, M2 = random_sl2(rng), random_sl2(rng)
        iwa = max(iwa, np.max(np.abs(coords.iwasawa_reassemble(*coords.iwasawa(M)).as_array() - M.as_array())))
        hom = max(hom, np.max(np.abs(coords.sl2_su11(M @ M2).as_array()
                                     - (coords.sl2_su11(M) @ coords.sl2_su11(M2)).as_array())))
        g = coords.RealJacobiElement(M, *rng.uniform(-1, 1, 2))
        a = coords.to_disk(coords.xj1_action(g, p))
        b = alg.jacobi_act(coords.jacobi_element_from_real(g), coords.to_disk(p))
        square = max(square, abs(a.z - b.z), abs(a.w - b.w))
    fit = coords.fit_kb_parameters(coords.UpperHalfPoint(0.3 + 1.2j, 0.5 - 0.4j), k)
    kb = max(abs(fit["lam"] - 4 * float(k)) / (4 * float(k)), abs(fit["mu"] * math.pi - 1))
    return [
        _check("coords", "cayley_roundtrip", "(v, u) -> (z, w) -> (v, u)", rt, tol.coords),
        _check("coords", "pullback", "C x D1 metric pulled back through the Cayley map vs two-form", pull, tol.kernel),
        _check("coords", "ez_metric", "EZ metric in (x, y, p, q) vs pullback", ez, tol.kernel),
        _check("coords", "iwasawa", "N A K reassembly reproduces M", iwa, tol.coords),
        _check("coords", "sl2_su11_homomorphism", "C^-1 (M1 M2) C = (C^-1 M1 C)(C^-1 M2 C)", hom, tol.coords),
        _check("coords", "commuting_square", "Cayley o real action = complex action o Cayley", square, 1e-10),
        _check("coords", "potential_fit", "Levi form of the upper-half potential: lam = 4k, mu = 1/pi", kb, 1e-6),
    ]


SUITES = {
    "algebra": suite_algebra,
    "kernel": suite_kernel,
    "diffops": suite_diffops,
    "fock": suite_fock,
    "dynamics": suite_dynamics,
    "coords": suite_coords,
}


@dataclass(frozen=True)
class VerifyReport:
    k: str
    mode: str
    seed: int
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"k": self.k, "mode": self.mode, "seed": self.seed, "passed": self.passed,
                "checks": [asdict(c) for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def run_verify(cfg: RunConfig, suites=("all",), workers: int | None = None) -> VerifyReport:
    """Run the selected suites concurrently and collect the checks in suite order."""
    names = SUITE_NAMES if "all" in suites else tuple(s for s in SUITE_NAMES if s in suites)
    unknown = set(suites) - set(SUITE_NAMES) - {"all"}
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(sorted(unknown))}")
    alg.Weight(cfg.k, cfg.mode)
    workers = workers or thread_cap(len(names))
    with ThreadPoolExecutor(max_workers=max(1, min(workers, len(names)))) as ex:
        results = list(ex.map(lambda n: SUITES[n](cfg), names))
    return VerifyReport(str(cfg.k), cfg.mode, cfg.seed, tuple(c for r in results for c in r))
