"""Partial L-function of a quasi-elliptic matrix, the real-analytic
Eisenstein series of F, and the geodesic-period identity tying them.

For quasi-elliptic A with module M = O_F + omega*O_F and unit group
U = U_F x <eps>, the partial L-function is

    L_A(s) = sign(c_j tr A_j) * sum' sign(beta_r1 beta_r2) / |N(beta)|^s

over beta in (M \\ 0)/U, convergent for Re(s) > 1.  The module evaluates it
by direct orbit summation (Re(s) >= 1.5 for a calibrated tail), evaluates
the Eisenstein series

    E_F(z, s) = sum'_{(mu,nu) in O_F^2/U_F} prod_k y_k^s / |mu_k z_k + nu_k|^{2s}

and its z_j-derivative, and checks the period identity: the integral of
(d/dz_j) E_F along the geodesic arc from tau to A_j(tau) above the real
fixed points equals

    Gamma((s+1)/2)^2 * Vol^s / (Gamma(s) * 2i * d_F^s) * L_A(s),

with Vol = d_F * (omega_r1 - omega_r2) * prod Im(omega_c).

The derivative d/dz_j is the standard Wirtinger operator (1/2)(d/dx - i d/dy);
with this factor both the finite-difference check and the period identity
hold.  The inner nu-lattice sums are evaluated by Poisson summation over the
codifferent, turning the polynomially decaying series into Bessel-type terms
with exponential decay.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as _gamma, kv as _kv

from .field_arith import FieldData, ModMatrix
from .quasi_elliptic import QuasiEllipticData, quasi_data, psi, NotQuasiElliptic
from .unit_domain import (TruncationParams, enumerate_module_orbits,
                          enumerate_unit_orbits, weighted_lattice)

TWO_PI = 2.0 * math.pi


class CapExceeded(RuntimeError):
    pass


# -- the partial L-function ---------------------------------------------------

@dataclass(frozen=True)
class LASeriesValue:
    """Truncated orbit sum for L_A(s) with a calibrated tail estimate.

    The tail uses the empirically linear growth of the orbit count: the
    density is measured on [X/2, X] and doubled.  heuristic_tail records
    that this is a calibration, not a proof.
    """

    s: complex
    value: complex
    tail_error: float
    norm_bound: float
    heuristic_tail: bool = True


def l_a(A: ModMatrix, s: complex, norm_bound: float = 2000.0,
        max_terms: int = 5_000_000) -> LASeriesValue:
    """L_A(s) by summation over module orbits with |N(beta)| <= norm_bound."""
    s = complex(s)
    assert s.real >= 1.5, "certified tails require Re(s) >= 1.5"
    data = quasi_data(A)
    X = float(norm_bound)
    reps = enumerate_module_orbits(data, X, max_terms)
    total = 0.0 + 0.0j
    n_half = 0
    for m, n in reps:
        b1, b2, _ = data.beta_embs(m, n)
        nrm = abs(float(data.norm_beta(m, n)))
        total += math.copysign(1.0, b1 * b2) * cmath.exp(-s * math.log(nrm))
        if nrm <= X / 2:
            n_half += 1
    sigma = s.real
    density = (len(reps) - n_half) / (X / 2)
    tail = 2.0 * density * X ** (1 - sigma) / (sigma - 1)
    return LASeriesValue(s, data.sign_c_tr * total, tail, X)


# -- Eisenstein series by Poisson summation -----------------------------------

def _ghat0(s: float, h):
    """Fourier transform of (t^2 + h^2)^(-s) at frequency 0."""
    return math.sqrt(math.pi) * _gamma(s - 0.5) / _gamma(s) * h ** (1 - 2 * s)


def _ghat(s: float, h: float, xi):
    """Fourier transform of (t^2 + h^2)^(-s) at frequency xi != 0:
    2 pi^s / Gamma(s) * h^(1/2-s) |xi|^(s-1/2) K_{s-1/2}(2 pi h |xi|)."""
    a = np.abs(xi)
    return (2 * math.pi ** s / _gamma(s) * h ** (0.5 - s)
            * a ** (s - 0.5) * _kv(s - 0.5, TWO_PI * h * a))


def _dghat_dh(s: float, h: float, xi):
    """d/dh of _ghat; the Bessel order shifts up by one."""
    a = np.abs(xi)
    return -(TWO_PI * a) * (2 * math.pi ** s / _gamma(s) * h ** (0.5 - s)
                            * a ** (s - 0.5) * _kv(s + 0.5, TWO_PI * h * a))


_REP_CACHE: dict = {}


def _unit_rep_arrays(field: FieldData, cap: float) -> tuple:
    """Embedding arrays of (O_F \\ 0)/U_F representatives, cached."""
    key = (field.D, float(cap))
    if key not in _REP_CACHE:
        reps = enumerate_unit_orbits(field, cap)
        embs = np.array([r.embeddings() for r in reps], dtype=float)
        _REP_CACHE[key] = tuple(embs[:, k] for k in range(field.n))
    return _REP_CACHE[key]


def _eis_core(field: FieldData, z: tuple, s: float, j: int, want_deriv: bool,
              trunc: TruncationParams, mu_cap: float):
    """E_F(z, s) and optionally its Wirtinger z_j-derivative.

    Pairs are grouped by the first entry: (0, nu) runs over unit-orbit
    representatives, and for each representative mu != 0 the free nu-sum
    is evaluated by Poisson summation over the codifferent, with frequency
    terms cut at exponential weight trunc.weight_bound.
    """
    z = tuple(complex(w) for w in z)
    assert len(z) == field.n and all(w.imag > 0 for w in z)
    s = float(s)
    assert s >= 1.5, "certified truncation requires s >= 1.5"
    n = field.n
    x = np.array([w.real for w in z])
    y = np.array([w.imag for w in z])
    py = float(np.prod(y))
    covol = math.sqrt(field.d_F)
    d_embs = np.array(field.different.embeddings()) if n == 2 else np.array([1.0])
    B = trunc.weight_bound

    embs = _unit_rep_arrays(field, mu_cap)
    if embs[0].size > trunc.max_terms:
        raise CapExceeded("too many unit-orbit representatives")

    # (0, nu): prod y^s / prod |nu_k|^{2s}
    q0 = np.ones_like(embs[0])
    for k in range(n):
        q0 = q0 * np.abs(embs[k]) ** (2 * s)
    e_zero_mu = py ** s * float(np.sum(1.0 / q0))
    value = e_zero_mu
    dvalue = 0.5 * (-1j) * (s / y[j]) * e_zero_mu if want_deriv else 0.0

    # (mu, nu), mu != 0: frequency-zero part, vectorized over all mu reps
    h = [np.abs(embs[k]) * y[k] for k in range(n)]
    g0 = _ghat0(s, h[0])
    for k in range(1, n):
        g0 = g0 * _ghat0(s, h[k])
    zero_terms = py ** s / covol * g0
    value += float(np.sum(zero_terms))
    if want_deriv:
        # d/dx_j = 0 here; d/dy_j = (s + (1-2s))/y_j = (1-s)/y_j per term
        dvalue += 0.5 * (-1j) * ((1 - s) / y[j]) * complex(np.sum(zero_terms))

    # nonzero frequencies survive only while 2 pi min_k h_k/|delta_k| <= B
    hmin = h[0] / np.abs(d_embs[0])
    for k in range(1, n):
        hmin = np.minimum(hmin, h[k] / np.abs(d_embs[k]))
    active = np.nonzero(TWO_PI * hmin <= B)[0]
    for i in active:
        mu = np.array([embs[k][i] for k in range(n)])
        hk = np.array([h[k][i] for k in range(n)])
        if n == 1:
            e1, _, _ = weighted_lattice(field, TWO_PI * hk[0], 1.0, B,
                                        trunc.max_terms)
            xis = [e1]
        else:
            e1, e2, _ = weighted_lattice(field, TWO_PI * hk[0] / abs(d_embs[0]),
                                         TWO_PI * hk[1] / abs(d_embs[1]), B,
                                         trunc.max_terms)
            xis = [e1 / d_embs[0], e2 / d_embs[1]]
        if xis[0].size == 0:
            continue
        phase = np.exp(2j * math.pi * sum(mu[k] * x[k] * xis[k]
                                          for k in range(n)))
        gs = [_ghat(s, hk[k], xis[k]) for k in range(n)]
        prod_g = gs[0]
        for k in range(1, n):
            prod_g = prod_g * gs[k]
        contrib = py ** s / covol * np.sum(phase * prod_g)
        value += contrib.real  # conjugate frequencies pair up
        if want_deriv:
            dx = py ** s / covol * np.sum(
                (2j * math.pi * mu[j] * xis[j]) * phase * prod_g)
            prod_dg = _dghat_dh(s, hk[j], xis[j])
            for k in range(n):
                if k != j:
                    prod_dg = prod_dg * gs[k]
            dy = (s / y[j]) * contrib \
                + py ** s / covol * abs(mu[j]) * np.sum(phase * prod_dg)
            dvalue += 0.5 * (dx - 1j * dy)
    return value, dvalue


def eis(field: FieldData, z: tuple, s: float,
        trunc: TruncationParams = TruncationParams(),
        mu_cap: float = 20000.0) -> float:
    """The Eisenstein series E_F(z, s) for real s >= 1.5."""
    value, _ = _eis_core(field, z, s, 0, False, trunc, mu_cap)
    return value


def eis_dz1(field: FieldData, z: tuple, s: float, j: int = 0,
            trunc: TruncationParams = TruncationParams(),
            mu_cap: float = 20000.0) -> complex:
    """Wirtinger derivative (1/2)(d/dx_j - i d/dy_j) of E_F(z, s)."""
    _, dvalue = _eis_core(field, z, s, j, True, trunc, mu_cap)
    return dvalue


def eis_direct(field: FieldData, z: tuple, s: float, box: float = 60.0,
               max_terms: int = 5_000_000) -> tuple:
    """Reference implementation by direct lattice summation (slowly
    convergent; used to cross-check the Poisson evaluation).  Returns
    (E_F, dE_F/dz_1) with the derivative from its own termwise series:

        (s/2i) sum y_1^{s-1} (mu_1 conj(z_1) + nu_1)^2 / |mu_1 z_1 + nu_1|^{2s+2}
               * prod_{k>1} y_k^s / |mu_k z_k + nu_k|^{2s}.
    """
    z = tuple(complex(w) for w in z)
    n = field.n
    y = [w.imag for w in z]
    py = float(np.prod(y))
    val = 0.0
    dval = 0.0 + 0.0j
    # (0, nu): nu runs over unit-orbit representatives, not the whole box
    for nu in enumerate_unit_orbits(field, (box / min(y)) ** n):
        ne = nu.embeddings()
        val += py ** s / float(np.prod([abs(e) ** (2 * s) for e in ne]))
        dval += (s / 2j) * y[0] ** (s - 1) / abs(ne[0]) ** (2 * s) \
            * float(np.prod([y[k] ** s / abs(ne[k]) ** (2 * s)
                             for k in range(1, n)]))
    for mu in enumerate_unit_orbits(field, (box / min(y)) ** n):
        me = np.array(mu.embeddings())
        # nu in a real-part box around -mu_k z_k at every embedding
        if n == 1:
            lo = [-me[0] * z[0].real - box]
            hi = [-me[0] * z[0].real + box]
            nu1 = np.arange(math.ceil(lo[0]), math.floor(hi[0]) + 1)
            f = [me[0] * np.asarray(z[0]) + nu1]
        else:
            w1, w2 = field.w_embs
            ctr = [-me[k] * z[k].real for k in range(2)]
            bb = np.arange(math.ceil((ctr[0] - box - (ctr[1] + box)) / (w1 - w2)),
                           math.floor((ctr[0] + box - (ctr[1] - box)) / (w1 - w2)) + 1)
            rows_a, rows_b = [], []
            for b in bb:
                a_lo = math.ceil(max(ctr[0] - box - b * w1, ctr[1] - box - b * w2))
                a_hi = math.floor(min(ctr[0] + box - b * w1, ctr[1] + box - b * w2))
                if a_hi >= a_lo:
                    aa = np.arange(a_lo, a_hi + 1)
                    rows_a.append(aa)
                    rows_b.append(np.full(aa.shape, b))
            A = np.concatenate(rows_a) if rows_a else np.zeros(0)
            Bc = np.concatenate(rows_b) if rows_b else np.zeros(0)
            assert A.size <= max_terms
            f = [me[k] * z[k] + (A + Bc * field.w_embs[k]) for k in range(2)]
        q = np.abs(f[0]) ** 2
        for k in range(1, n):
            q = q * np.abs(f[k]) ** 2
        ok = q > 1e-18
        val += py ** s * float(np.sum(1.0 / q[ok] ** s))
        dterm = (np.conj(f[0]) ** 2 / np.abs(f[0]) ** (2 * s + 2))[ok]
        rest = np.ones_like(dterm)
        for k in range(1, n):
            rest = rest * (y[k] ** s / np.abs(f[k]) ** (2 * s))[ok]
        dval += (s / 2j) * y[0] ** (s - 1) * np.sum(dterm * rest)
    return val, dval


# -- the geodesic arc and its period ------------------------------------------

@dataclass(frozen=True)
class GeodesicArc:
    """Arc of the semicircle over the real fixed points, from tau to A(tau).

    The chart f(w) = i (w - omega_r2)/(w - omega_r1) maps the semicircle to
    the positive reals with f(A w) = eps_r1^2 f(w); the arc is parametrized
    by g(t) = (t omega_r1 - i omega_r2)/(t - i) with f(g(t)) = t, running
    from t_base to eps_r1^2 * t_base.
    """

    data: QuasiEllipticData
    t_base: float
    t_end: float

    def g(self, t: float) -> complex:
        d = self.data
        return (t * d.omega_r1 - 1j * d.omega_r2) / (t - 1j)

    def g_prime(self, t: float) -> complex:
        d = self.data
        return -1j * (d.omega_r1 - d.omega_r2) / (t - 1j) ** 2

    @property
    def tau(self) -> complex:
        return self.g(self.t_base)

    @property
    def endpoint(self) -> complex:
        return self.g(self.t_end)


def geodesic_arc(data: QuasiEllipticData, t_base: float = 1.0) -> GeodesicArc:
    assert t_base > 0
    arc = GeodesicArc(data, t_base, data.eps_r1 ** 2 * t_base)
    # invariant: the chart intertwines A with scaling by eps_r1^2
    a_tau = data.A.moebius(data.j, arc.tau)
    f = 1j * (a_tau - data.omega_r2) / (a_tau - data.omega_r1)
    expected = data.eps_r1 ** 2 * arc.t_base
    assert abs(f - expected) < 1e-9 * max(1.0, abs(expected))
    return arc


def geodesic_period(A: ModMatrix, s: float, m: int = 64,
                    trunc: TruncationParams = TruncationParams(),
                    t_base: float = 1.0, tol: float = 1e-6,
                    mu_cap: float = 20000.0) -> tuple:
    """Integral of (d/dz_j) E_F(z_j, omega_c, s) dz_j along the arc from tau
    to A(tau), by Gauss-Legendre quadrature in log f-coordinate, doubling the
    order until two consecutive values agree within tol/10.

    Returns (value, error_estimate).
    """
    data = quasi_data(A)
    arc = geodesic_arc(data, t_base)
    field = data.field
    j = data.j
    u0, u1 = math.log(arc.t_base), math.log(arc.t_end)

    def insert(zj: complex) -> tuple:
        wc = data.omega_c
        return wc[:j] + (zj,) + wc[j:]

    def quad(order: int) -> complex:
        nodes, weights = np.polynomial.legendre.leggauss(order)
        u = (u0 + u1) / 2 + (u1 - u0) / 2 * nodes
        total = 0.0 + 0.0j
        for ui, wi in zip(u, weights):
            t = math.exp(ui)
            dz = eis_dz1(field, insert(arc.g(t)), s, j, trunc, mu_cap)
            total += wi * dz * arc.g_prime(t) * t
        return total * (u1 - u0) / 2

    prev = quad(m)
    while True:
        m *= 2
        cur = quad(m)
        err = abs(cur - prev)
        if err < tol / 10 or m >= 512:
            return cur, err
        prev = cur


def volume(data: QuasiEllipticData) -> float:
    """Vol = d_F * (omega_r1 - omega_r2) * prod Im(omega_c)."""
    v = data.omega_r1 - data.omega_r2
    for w in data.omega_c:
        v *= w.imag
    return data.field.d_F * v


def period_rhs(A: ModMatrix, s: float, norm_bound: float = 2000.0) -> tuple:
    """Right-hand side of the period identity,

        Gamma((s+1)/2)^2 Vol^s / (Gamma(s) 2i d_F^s) * L_A(s),

    returned as (value, tail_budget)."""
    data = quasi_data(A)
    la = l_a(A, s, norm_bound)
    pref = (_gamma((s + 1) / 2) ** 2 * volume(data) ** s
            / (_gamma(s) * 2j * data.field.d_F ** s))
    return pref * la.value, abs(pref) * la.tail_error


def period_defect(A: ModMatrix, s: float, norm_bound: float = 2000.0,
                  m: int = 64, trunc: TruncationParams = TruncationParams(),
                  tol: float = 1e-6, mu_cap: float = 20000.0) -> tuple:
    """|period - RHS| of the period identity, with its combined budget.

    Returns (defect, budget, period, rhs); the budget adds the quadrature
    estimate and the L-series tail (heuristic)."""
    period, qerr = geodesic_period(A, s, m, trunc, tol=tol, mu_cap=mu_cap)
    rhs, la_budget = period_rhs(A, s, norm_bound)
    return abs(period - rhs), qerr + la_budget + tol, period, rhs


def l_a_deriv_report(A: ModMatrix,
                     trunc: TruncationParams = TruncationParams()) -> dict:
    """The order-(n-1) derivative of L_A at s = 0 via its closed form
    L_A^{(n-1)}(0) = (n-1)! Psi(A).

    This is the only access to s = 0 data in this package: the series for
    L_A is summed on Re(s) >= 1.5 only, and no analytic continuation is
    performed; the derivative value comes from the special-value formula."""
    field = A.field
    n = field.n
    return {
        "deriv_order": n - 1,
        "value": math.factorial(n - 1) * psi(field, A, trunc=trunc),
        "method": "special-value formula (n-1)! * Psi(A); "
                  "no analytic continuation of the series",
    }
