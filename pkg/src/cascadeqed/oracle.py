"""Brute-force verification: discretized waveguide modes, direct RK4 integration.

The waveguide continuum is replaced by n_modes equally spaced modes in a
frequency window, coupled with g_i = V_i sqrt(dk / 2 pi). The two-excitation
Schroedinger equation is integrated by classic 4th-order explicit stepping in
a rotating frame, and every analytic prediction is compared against the
trajectory.

Discretization error model (measured, and derivable from the truncated-band
self-energy): probabilities carry a persistent offset ~ 2 Gamma/(pi half_width)
that no mode refinement removes, and the uniform grid makes the dynamics
trustworthy only for t below the recurrence time t_rec = 2 pi/d_omega. The
default window is therefore the widest one whose recurrence lies safely past
t_max, and the comparison harness stitches a window cascade: a wide early
window for t <= t_max/6 and the standard window beyond, each used strictly
inside its own trust horizon.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .analytic import alpha_spontaneous
from .observables import beta_k as beta_k_analytic
from .observables import gamma_k as gamma_k_analytic
from .observables import spectral_density, state_probabilities
from .params import SystemParams
from .pulses import PulseSpec

_RECURRENCE_MARGIN = 1.05
_EARLY_MARGIN = 1.25


class OracleError(RuntimeError):
    """Integration aborted (norm drift) or refused (resource estimate)."""


@dataclass(frozen=True)
class OracleConfig:
    """Mode-discretization and integration settings.

    half_width = None resolves to max(40 max(G1,G2) + |alpha_r| Omega1,
    pi (n_modes-1)/(1.05 t_max)); dt = None resolves to 0.1/half_width in the
    rotating frame (0.1/max|diagonal| in the lab frame).
    """

    t_max: float
    n_modes: int = 801
    window_center: float | None = None
    half_width: float | None = None
    dt: float | None = None
    frame: str = "rotating"
    store_every: int = 50
    gamma_store: str = "final"  # final | strided | none
    gamma_every: int = 10
    memory_budget_bytes: float = 6e9
    norm_tol: float = 1e-6

    def __post_init__(self):
        if self.n_modes < 101 or self.n_modes % 2 == 0:
            raise ValueError(f"n_modes must be odd and >= 101, got {self.n_modes}")
        if not (self.t_max > 0):
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.frame not in ("rotating", "lab"):
            raise ValueError(f"frame must be 'rotating' or 'lab', got {self.frame!r}")
        if self.gamma_store not in ("final", "strided", "none"):
            raise ValueError(f"bad gamma_store {self.gamma_store!r}")

    def resolve(self, p: SystemParams) -> "ResolvedConfig":
        center = self.window_center
        if center is None:
            center = p.omega1 + 0.5 * (p.delta_omega - p.omega1)
        hw = self.half_width
        if hw is None:
            hw = max(40.0 * max(p.gamma1, p.gamma2) + abs(p.delta_omega - p.omega1),
                     np.pi * (self.n_modes - 1) / (_RECURRENCE_MARGIN * self.t_max))
        if not (abs(p.omega1 - center) < hw and abs(p.delta_omega - center) < hw):
            raise ValueError(
                "window does not cover both transition detunings: "
                f"center={center}, half_width={hw}"
            )
        if self.frame == "rotating":
            dt_cap = 0.1 / hw
        else:
            dt_cap = 0.1 / (2.0 * (center + hw))
        dt = self.dt if self.dt is not None else dt_cap
        if dt > dt_cap * (1 + 1e-12):
            raise ValueError(f"dt={dt} violates dt <= {dt_cap} for this window/frame")
        nsteps = int(np.ceil(self.t_max / dt - 1e-9))
        return ResolvedConfig(config=self, center=float(center), half_width=float(hw),
                              dt=self.t_max / nsteps, n_steps=nsteps)


@dataclass(frozen=True)
class ResolvedConfig:
    config: OracleConfig
    center: float
    half_width: float
    dt: float
    n_steps: int


@dataclass(frozen=True)
class PulseInit:
    """Initial state: emitter amplitude alpha0 in |f>, one incident photon pulse."""

    pulse: PulseSpec
    alpha0: complex = 0.0


@dataclass
class OracleTrajectory:
    """Stored trajectory, in the paper's slowly-varying amplitude conventions."""

    params: SystemParams
    resolved: ResolvedConfig
    omega: np.ndarray            # mode frequencies
    t: np.ndarray                # stored times
    alpha: np.ndarray            # complex per stored time
    beta_k: np.ndarray           # complex [n_t, n_modes], continuum-normalized
    p_f0: np.ndarray
    p_e1: np.ndarray
    p_g2: np.ndarray
    norm: np.ndarray
    gamma_snapshots: dict = field(default_factory=dict)  # stored-index -> packed c_nm
    pulse_renorm: float | None = None
    wall_seconds: float = 0.0

    @property
    def d_omega(self) -> float:
        return float(self.omega[1] - self.omega[0])

    def gamma_continuum(self, stored_index: int) -> np.ndarray:
        """Full symmetric continuum gamma(k_n, k_m) matrix from a packed snapshot."""
        packed = self.gamma_snapshots[stored_index]
        n = self.omega.size
        full = np.empty((n, n), dtype=complex)
        iu, ju = np.triu_indices(n)
        c = packed.copy()
        off = iu != ju
        c[off] /= np.sqrt(2.0)  # undo the normalized-pair weight
        full[iu, ju] = c
        full[ju, iu] = c
        dk = self.d_omega / self.params.v_g
        return full / dk


def _pack_gamma(psr, psi_im, rot_phase):
    n = psr.shape[0]
    iu, ju = np.triu_indices(n)
    vals = (psr[iu, ju] + 1j * psi_im[iu, ju]) * rot_phase
    vals[iu != ju] *= np.sqrt(2.0)
    return vals


def run_oracle(p: SystemParams, cfg: OracleConfig, init="fully_excited") -> OracleTrajectory:
    """Integrate the discretized model; aborts if the norm drifts beyond tolerance."""
    rc = cfg.resolve(p)
    n = cfg.n_modes
    est = 6 * 8 * n * n + 4 * 8 * n  # SoA psi planes + vectors
    n_stored = rc.n_steps // cfg.store_every + 2
    est += n_stored * n * 16
    if cfg.gamma_store != "none":
        n_gam = 1 if cfg.gamma_store == "final" else n_stored // cfg.gamma_every + 2
        est += n_gam * (n * (n + 1) // 2) * 16
    if est > cfg.memory_budget_bytes:
        raise OracleError(
            f"estimated memory {est / 1e9:.2f} GB exceeds budget "
            f"{cfg.memory_budget_bytes / 1e9:.2f} GB"
        )

    omega = np.linspace(rc.center - rc.half_width, rc.center + rc.half_width, n)
    d_omega = omega[1] - omega[0]
    dk = d_omega / p.v_g
    g1 = p.V1 * np.sqrt(dk / (2.0 * np.pi))
    g2 = p.V2 * np.sqrt(dk / (2.0 * np.pi))
    rot = 2.0 * p.omega1 if cfg.frame == "rotating" else 0.0
    dph = omega - 0.5 * rot          # per-photon diagonal
    diag_b = p.omega1 + omega - rot  # |e, 1_n> diagonal
    diag_a = p.omega2 - rot
    sq2g1 = np.sqrt(2.0) * g1
    g1s = g1 / np.sqrt(2.0)

    # initial state
    if init == "fully_excited":
        a = 1.0 + 0.0j
        b = np.zeros(n, dtype=complex)
        renorm = None
    elif isinstance(init, PulseInit):
        a = complex(init.alpha0)
        if init.pulse.weight > 0.0:
            raw = np.sqrt(dk) * init.pulse.fourier(omega / p.v_g)
            got = float(np.sum(np.abs(raw) ** 2))
            if got <= 0.0:
                raise OracleError("pulse has no weight on the mode grid")
            renorm = np.sqrt(init.pulse.weight / got)
            b = renorm * raw
            renorm = float(renorm)
        else:
            b = np.zeros(n, dtype=complex)
            renorm = None
        if abs(abs(a) ** 2 + float(np.sum(np.abs(b) ** 2)) - 1.0) > 1e-6 and \
                abs(a) ** 2 + float(np.sum(np.abs(b) ** 2)) > 1.0 + 1e-9:
            raise OracleError("initial state norm exceeds 1")
    else:
        raise ValueError(f"unknown init {init!r}")

    yr = np.zeros((n, n))
    yi = np.zeros((n, n))
    wr = np.empty((n, n))
    wi = np.empty((n, n))
    w2r = np.empty((n, n))
    w2i = np.empty((n, n))
    sy_r = np.zeros(n)
    sy_i = np.zeros(n)
    s1_r = np.empty(n)
    s1_i = np.empty(n)
    s2_r = np.empty(n)
    s2_i = np.empty(n)
    rown = np.empty(n)
    by = b.copy()
    ay = a

    dt = rc.dt
    store_every = cfg.store_every
    ts, alphas, betas, pf, pe, pg, norms = [], [], [], [], [], [], []
    gam = {}

    def store(step_t, step_idx, stored_idx):
        phase_a = np.exp(1j * (p.omega2 - rot) * step_t)
        phase_b = np.exp(1j * (p.omega1 - rot) * step_t)
        alpha_paper = ay * phase_a
        beta_paper = by * (phase_b / np.sqrt(dk))
        _kernels.row_norms2(yr, yi, rown)
        pg_v = float(np.sum(rown))
        pf_v = abs(ay) ** 2
        pe_v = float(np.sum(np.abs(by) ** 2))
        ts.append(step_t)
        alphas.append(alpha_paper)
        betas.append(beta_paper)
        pf.append(pf_v)
        pe.append(pe_v)
        pg.append(pg_v)
        norms.append(pf_v + pe_v + pg_v)
        if abs(norms[-1] - 1.0) > cfg.norm_tol:
            raise OracleError(
                f"norm drift {norms[-1] - 1.0:+.3e} exceeds {cfg.norm_tol:.1e} "
                f"at step {step_idx} (t = {step_t:.6g}); reduce dt or check config"
            )
        want_gamma = (cfg.gamma_store == "strided"
                      and stored_idx % cfg.gamma_every == 0) \
            or (cfg.gamma_store != "none" and step_idx == rc.n_steps)
        if want_gamma:
            gam[stored_idx] = _pack_gamma(yr, yi, np.exp(-1j * rot * step_t))

    t0 = time.perf_counter()
    store(0.0, 0, 0)
    stored = 1
    for step in range(rc.n_steps):
        car, cai = ay.real, ay.imag
        cb = by
        cs_r, cs_i = sy_r, sy_i
        cw = (yr, yi)
        for stage in range(4):
            c = dt / (4 - stage)
            if stage % 2 == 0:
                tw, ts_row = (w2r, w2i), (s2_r, s2_i)
            else:
                tw, ts_row = (wr, wi), (s1_r, s1_i)
            _kernels.sweep_psi(yr, yi, cw[0], cw[1], cb.real.copy(), cb.imag.copy(),
                               dph, c, g1s, tw[0], tw[1], ts_row[0], ts_row[1])
            s_c = cs_r + 1j * cs_i
            f_b = -1j * (diag_b * cb + g2 * (car + 1j * cai) + sq2g1 * s_c)
            f_a = -1j * (diag_a * (car + 1j * cai) + g2 * np.sum(cb))
            nb = by + c * f_b
            na = ay + c * f_a
            cb = nb
            car, cai = na.real, na.imag
            cw = tw
            cs_r, cs_i = ts_row
        # after 4 sweeps the new state sits in (wr, wi) with row sums in s1
        yr, wr = wr, yr
        yi, wi = wi, yi
        sy_r, s1_r = s1_r, sy_r
        sy_i, s1_i = s1_i, sy_i
        by = cb
        ay = complex(car, cai)
        if (step + 1) % store_every == 0 or step + 1 == rc.n_steps:
            store((step + 1) * dt, step + 1, stored)
            stored += 1

    return OracleTrajectory(
        params=p, resolved=rc, omega=omega,
        t=np.array(ts), alpha=np.array(alphas), beta_k=np.array(betas),
        p_f0=np.array(pf), p_e1=np.array(pe), p_g2=np.array(pg),
        norm=np.array(norms), gamma_snapshots=gam, pulse_renorm=renorm,
        wall_seconds=time.perf_counter() - t0,
    )


def oracle_probabilities(traj: OracleTrajectory):
    """Time series (t, P_f0, P_e1, P_g2) computed from the stored state."""
    return traj.t, traj.p_f0, traj.p_e1, traj.p_g2


@dataclass(frozen=True)
class ComparisonTolerances:
    alpha_abs: float = 1e-3
    p_f0_abs: float = 1e-3
    p_e1_abs: float = 1e-3
    p_g2_abs: float = 1e-3
    beta_k_abs: float = 2e-3
    gamma_kk_abs: float = 2e-3
    spectrum_corr_min: float = 0.99


@dataclass
class ComparisonReport:
    """Per-observable maximum errors of the oracle against the closed forms."""

    entries: list
    passed: bool
    meta: dict

    def to_json(self) -> str:
        return json.dumps({"pass": self.passed, "observables": self.entries,
                           "meta": self.meta}, indent=2, sort_keys=True)


def _seg_errors(traj: OracleTrajectory, p: SystemParams, t_lo: float, t_hi: float):
    sel = (traj.t >= t_lo - 1e-9) & (traj.t <= t_hi + 1e-9)
    t = traj.t[sel]
    pf_a, pe_a, pg_a = state_probabilities(t, p)
    alpha_a = alpha_spontaneous(t, p)
    errs = {
        "alpha": np.max(np.abs(traj.alpha[sel] - alpha_a)),
        "p_f0": np.max(np.abs(traj.p_f0[sel] - pf_a)),
        "p_e1": np.max(np.abs(traj.p_e1[sel] - pe_a)),
        "p_g2": np.max(np.abs(traj.p_g2[sel] - pg_a)),
    }
    rel = {
        "alpha": errs["alpha"] / np.max(np.abs(alpha_a)),
        "p_f0": errs["p_f0"] / np.max(pf_a),
        "p_e1": errs["p_e1"] / max(np.max(pe_a), 1e-300),
        "p_g2": errs["p_g2"] / max(np.max(pg_a), 1e-300),
    }
    bk_a = beta_k_analytic(traj.omega[None, :] / p.v_g, t[:, None], p)
    bk_err = np.max(np.abs(traj.beta_k[sel] - bk_a))
    errs["beta_k"] = bk_err
    rel["beta_k"] = bk_err / np.max(np.abs(bk_a))
    return errs, rel


def compare_with_analytic(
    p: SystemParams,
    cfg: OracleConfig | None = None,
    tolerances: ComparisonTolerances | None = None,
) -> ComparisonReport:
    """Run the window-cascade oracle and compare every analytic counterpart.

    Early times (t <= t_max/6) come from a run with a wide window whose
    recurrence lies past the segment, late times from the standard window;
    each segment is trusted only below its recurrence horizon. Deterministic.
    """
    cfg = cfg or OracleConfig(t_max=300.0)
    tol = tolerances or ComparisonTolerances()
    t_split = cfg.t_max / 6.0
    hw_a = np.pi * (cfg.n_modes - 1) / (_EARLY_MARGIN * t_split)
    cfg_a = replace(cfg, t_max=t_split, half_width=hw_a, dt=None, gamma_store="none")
    cfg_b = replace(cfg, half_width=cfg.half_width, dt=None,
                    gamma_store="final" if cfg.gamma_store == "none" else cfg.gamma_store)

    traj_a = run_oracle(p, cfg_a)
    traj_b = run_oracle(p, cfg_b)
    err_a, rel_a = _seg_errors(traj_a, p, 0.0, t_split)
    err_b, rel_b = _seg_errors(traj_b, p, t_split, cfg.t_max)

    rc_a, rc_b = traj_a.resolved, traj_b.resolved
    meta = {
        "n_modes": cfg.n_modes,
        "t_split": t_split,
        "segments": [
            {"t_range": [0.0, t_split], "n_modes": cfg.n_modes, "dt": rc_a.dt,
             "window": [rc_a.center - rc_a.half_width, rc_a.center + rc_a.half_width],
             "wall_seconds": traj_a.wall_seconds},
            {"t_range": [t_split, cfg.t_max], "n_modes": cfg.n_modes, "dt": rc_b.dt,
             "window": [rc_b.center - rc_b.half_width, rc_b.center + rc_b.half_width],
             "wall_seconds": traj_b.wall_seconds},
        ],
        "max_norm_drift": float(max(np.max(np.abs(traj_a.norm - 1.0)),
                                    np.max(np.abs(traj_b.norm - 1.0)))),
    }

    windows = [m["window"] for m in meta["segments"]]
    dts = [m["dt"] for m in meta["segments"]]
    tol_map = {"alpha": tol.alpha_abs, "p_f0": tol.p_f0_abs, "p_e1": tol.p_e1_abs,
               "p_g2": tol.p_g2_abs, "beta_k": tol.beta_k_abs}
    entries = []
    ok = True
    for name, lim in tol_map.items():
        e = float(max(err_a[name], err_b[name]))
        r = float(max(rel_a[name], rel_b[name]))
        good = e <= lim
        ok = ok and good
        entries.append({"observable": name, "max_abs_err": e, "max_rel_err": r,
                        "n_modes": [cfg.n_modes, cfg.n_modes], "dt": dts,
                        "window": windows, "pass": good})

    # late-time spectrum slice against the asymptotic density and the exact
    # finite-t momentum amplitude (both sides carry the full fast phases, which
    # are applied analytically on the oracle side at snapshot time)
    idx = max(traj_b.gamma_snapshots)
    gam = traj_b.gamma_continuum(idx)
    t_end = traj_b.t[idx]
    diag = np.diag(gam)
    k = traj_b.omega / p.v_g
    gam_a = gamma_k_analytic(k, k, float(t_end), p)
    g_err = float(np.max(np.abs(diag - gam_a)))
    g_rel = g_err / float(np.max(np.abs(gam_a)))
    good = g_err <= tol.gamma_kk_abs * float(np.max(np.abs(gam_a)))
    ok = ok and good
    entries.append({"observable": "gamma_kk", "max_abs_err": g_err, "max_rel_err": g_rel,
                    "n_modes": [cfg.n_modes], "dt": [dts[1]], "window": [windows[1]],
                    "pass": good})

    s_or = np.abs(diag) ** 2 / traj_b.d_omega**2
    s_an = spectral_density(traj_b.omega, traj_b.omega, p)
    corr = float(np.dot(s_or, s_an) / (np.linalg.norm(s_or) * np.linalg.norm(s_an)))
    good = corr >= tol.spectrum_corr_min
    ok = ok and good
    entries.append({"observable": "spectrum_diag_corr", "max_abs_err": 1.0 - corr,
                    "max_rel_err": 1.0 - corr, "n_modes": [cfg.n_modes], "dt": [dts[1]],
                    "window": [windows[1]], "pass": good})

    return ComparisonReport(entries=entries, passed=ok, meta=meta)
