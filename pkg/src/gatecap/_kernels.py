"""Jitted inner loops for the stochastic maximizers.

These mirror the public objective functions exactly (same reduction and
entropy arithmetic) but run fully compiled, so a single optimization step
costs microseconds instead of a Python round trip per proposal.  The caller
owns the numpy Generator; drawing from it here continues the same stream,
which keeps runs bit-reproducible for a given seed.

Degenerate proposals (unnormalizable vectors, negative probability updates,
ensembles whose total weight underflows) are counted and skipped; the next
iteration simply draws fresh increments.
"""

import numpy as np
from numba import njit

DEGENERATE_NORM = 1e-14
PROB_FLOOR = 1e-12
TWO_PI = 2.0 * np.pi


@njit(cache=True)
def _entropy_from_eigs(w):
    # descending iteration to match the public entropy routine exactly
    s = 0.0
    for i in range(w.shape[0] - 1, -1, -1):
        lam = w[i]
        if lam > 0.0:
            s -= lam * np.log2(lam)
    return s if s > 0.0 else 0.0


@njit(cache=True)
def _rho_bob(m, rho):
    # rho[b, c] = sum_a m[a, b] * conj(m[a, c])
    d_a, d_b = m.shape
    for b in range(d_b):
        for c in range(d_b):
            acc = 0.0j
            for a in range(d_a):
                acc += m[a, b] * np.conj(m[a, c])
            rho[b, c] = acc


@njit(cache=True)
def _vec_norm(v):
    n2 = 0.0
    for i in range(v.shape[0]):
        n2 += v[i].real * v[i].real + v[i].imag * v[i].imag
    return np.sqrt(n2)


@njit(cache=True)
def _perturb(rng, sigma, src, dst):
    """dst = src + complex Gaussian increments; returns dst's norm."""
    n = src.shape[0]
    g = rng.normal(0.0, sigma, n)
    th = rng.uniform(0.0, TWO_PI, n)
    for i in range(n):
        dst[i] = src[i] + g[i] * complex(np.cos(th[i]), np.sin(th[i]))
    return _vec_norm(dst)


@njit(cache=True)
def _gs_rows(a, q):
    """Classical Gram-Schmidt on rows of a into q; returns replaced-row count.

    Matches the public routine: projections use the original row, dependent
    rows (residual below 1e-12) are replaced by the first canonical basis
    vector with significant weight outside the current span.
    """
    n = a.shape[0]
    replaced = 0
    for j in range(n):
        for c in range(n):
            q[j, c] = a[j, c]
        for i in range(j):
            acc = 0.0j
            for c in range(n):
                acc += np.conj(q[i, c]) * a[j, c]
            for c in range(n):
                q[j, c] -= acc * q[i, c]
        nrm = _vec_norm(q[j])
        if nrm < 1e-12:
            replaced += 1
            for t in range(n):
                for c in range(n):
                    q[j, c] = 0.0j
                q[j, t] = 1.0
                for i in range(j):
                    acc = np.conj(q[i, t])
                    for c in range(n):
                        q[j, c] -= acc * q[i, c]
                nrm = _vec_norm(q[j])
                if nrm > 1e-3:
                    break
        for c in range(n):
            q[j, c] /= nrm
    return replaced


@njit(cache=True)
def _e_value(u, a, b, joint, rho):
    d_a = a.shape[0]
    d_b = b.shape[0]
    for i in range(d_a):
        ai = a[i]
        for j in range(d_b):
            joint[i * d_b + j] = ai * b[j]
    out = np.dot(u, joint)
    _rho_bob(out.reshape(d_a, d_b), rho)
    return _entropy_from_eigs(np.linalg.eigvalsh(rho))


@njit(cache=True)
def _gain_value(u, psi, rho, d_a, d_b):
    _rho_bob(psi.reshape(d_a, d_b), rho)
    e0 = _entropy_from_eigs(np.linalg.eigvalsh(rho))
    out = np.dot(u, psi)
    _rho_bob(out.reshape(d_a, d_b), rho)
    return _entropy_from_eigs(np.linalg.eigvalsh(rho)) - e0


@njit(cache=True)
def climb_product(rng, u, a, b, sigma0, sigma_min, stall_window, max_steps,
                  trace_every, tr_steps, tr_vals):
    """Zero-temperature climb over product inputs; a and b end at the optimum."""
    d_a = a.shape[0]
    d_b = b.shape[0]
    joint = np.empty(d_a * d_b, np.complex128)
    rho = np.empty((d_b, d_b), np.complex128)
    na = np.empty_like(a)
    nb = np.empty_like(b)
    cur = _e_value(u, a, b, joint, rho)
    sigma = sigma0
    stall = 0
    accepted = 0
    degen = 0
    ntr = 0
    if trace_every > 0:
        tr_steps[0] = 0
        tr_vals[0] = cur
        ntr = 1
    steps = 0
    for step in range(max_steps):
        steps = step + 1
        nna = _perturb(rng, sigma, a, na)
        nnb = _perturb(rng, sigma, b, nb)
        if nna <= DEGENERATE_NORM or nnb <= DEGENERATE_NORM:
            degen += 1
            continue
        for i in range(d_a):
            na[i] /= nna
        for i in range(d_b):
            nb[i] /= nnb
        val = _e_value(u, na, nb, joint, rho)
        if val > cur:
            cur = val
            accepted += 1
            stall = 0
            for i in range(d_a):
                a[i] = na[i]
            for i in range(d_b):
                b[i] = nb[i]
        else:
            stall += 1
            if stall >= stall_window:
                sigma *= 0.5
                stall = 0
                if sigma < sigma_min:
                    break
        if trace_every > 0 and steps % trace_every == 0 and ntr < tr_steps.shape[0]:
            tr_steps[ntr] = steps
            tr_vals[ntr] = cur
            ntr += 1
    return cur, steps, sigma, accepted, degen, ntr


@njit(cache=True)
def climb_state(rng, u, psi, d_a, d_b, sigma0, sigma_min, stall_window, max_steps,
                trace_every, tr_steps, tr_vals):
    """Zero-temperature climb of the entanglement gain over arbitrary pure states."""
    dim = psi.shape[0]
    rho = np.empty((d_b, d_b), np.complex128)
    npsi = np.empty_like(psi)
    cur = _gain_value(u, psi, rho, d_a, d_b)
    sigma = sigma0
    stall = 0
    accepted = 0
    degen = 0
    ntr = 0
    if trace_every > 0:
        tr_steps[0] = 0
        tr_vals[0] = cur
        ntr = 1
    steps = 0
    for step in range(max_steps):
        steps = step + 1
        nn = _perturb(rng, sigma, psi, npsi)
        if nn <= DEGENERATE_NORM:
            degen += 1
            continue
        for i in range(dim):
            npsi[i] /= nn
        val = _gain_value(u, npsi, rho, d_a, d_b)
        if val > cur:
            cur = val
            accepted += 1
            stall = 0
            for i in range(dim):
                psi[i] = npsi[i]
        else:
            stall += 1
            if stall >= stall_window:
                sigma *= 0.5
                stall = 0
                if sigma < sigma_min:
                    break
        if trace_every > 0 and steps % trace_every == 0 and ntr < tr_steps.shape[0]:
            tr_steps[ntr] = steps
            tr_vals[ntr] = cur
            ntr += 1
    return cur, steps, sigma, accepted, degen, ntr


@njit(cache=True)
def _chi_value(u, psi, vs, p, d_a, d_b, rhos, rho_bar):
    k = vs.shape[0]
    d_v = vs.shape[1]
    dim = d_a * d_b
    for i in range(k):
        if d_v == d_a:
            enc = np.dot(vs[i], psi.reshape(d_a, d_b))
        else:
            # encoder on the gate qubit only: fold ancilla and Bob together
            enc = np.dot(vs[i], psi.reshape(2, (d_a // 2) * d_b)).reshape(d_a, d_b)
        memb = np.dot(u, enc.reshape(dim))
        _rho_bob(memb.reshape(d_a, d_b), rhos[i])
    for r in range(d_b):
        for c in range(d_b):
            acc = 0.0j
            for i in range(k):
                acc += p[i] * rhos[i, r, c]
            rho_bar[r, c] = acc
    chi = _entropy_from_eigs(np.linalg.eigvalsh(rho_bar))
    for i in range(k):
        if p[i] >= PROB_FLOOR:
            chi -= p[i] * _entropy_from_eigs(np.linalg.eigvalsh(rhos[i]))
    return chi


@njit(cache=True)
def anneal_chi(rng, u, psi, vs, p, d_a, d_b, equal_probs,
               sigma0, sigma_min, stall_window, tau0, tau_check_every,
               tau_down, tau_up, rate_scheme, warmup_steps, max_steps,
               best_psi, best_vs, best_p,
               trace_every, tr_steps, tr_vals):
    """Finite-temperature anneal of the encoded-ensemble Holevo information.

    psi, vs, p hold the current state and are updated in place; the best
    configuration ever visited is copied into best_psi / best_vs / best_p.
    """
    dim = psi.shape[0]
    k = vs.shape[0]
    d_v = vs.shape[1]
    rhos = np.empty((k, d_b, d_b), np.complex128)
    rho_bar = np.empty((d_b, d_b), np.complex128)
    npsi = np.empty_like(psi)
    nvs = np.empty_like(vs)
    gv = np.empty((d_v, d_v), np.complex128)
    np_ = np.empty_like(p)
    cur = _chi_value(u, psi, vs, p, d_a, d_b, rhos, rho_bar)
    best = cur
    best_psi[:] = psi
    best_vs[:] = vs
    best_p[:] = p
    sigma = sigma0
    tau = tau0
    stall = 0
    accepted = 0
    acc_win = 0
    degen = 0
    last_check = cur
    ntr = 0
    if trace_every > 0:
        tr_steps[0] = 0
        tr_vals[0] = cur
        ntr = 1
    steps = 0
    for step in range(max_steps):
        steps = step + 1
        ok = True
        nn = _perturb(rng, sigma, psi, npsi)
        if nn <= DEGENERATE_NORM:
            ok = False
        else:
            for i in range(dim):
                npsi[i] /= nn
        if ok:
            for m in range(k):
                g = rng.normal(0.0, sigma, d_v * d_v)
                th = rng.uniform(0.0, TWO_PI, d_v * d_v)
                idx = 0
                for r in range(d_v):
                    for c in range(d_v):
                        gv[r, c] = vs[m, r, c] + g[idx] * complex(np.cos(th[idx]), np.sin(th[idx]))
                        idx += 1
                _gs_rows(gv, nvs[m])
            if equal_probs:
                for i in range(k):
                    np_[i] = p[i]
            else:
                dp = rng.uniform(-sigma / 2.0, sigma / 2.0, k)
                den = 0.0
                for i in range(k):
                    np_[i] = p[i] * (1.0 + dp[i])
                    den += np_[i]
                if den <= PROB_FLOOR:
                    ok = False
                else:
                    for i in range(k):
                        np_[i] /= den
                        if np_[i] < 0.0:
                            ok = False
        if not ok:
            degen += 1
        else:
            val = _chi_value(u, npsi, nvs, np_, d_a, d_b, rhos, rho_bar)
            dv = val - cur
            if dv > 0.0 or rng.random() < np.exp(dv / tau):
                cur = val
                accepted += 1
                acc_win += 1
                stall = 0
                psi[:] = npsi
                vs[:] = nvs
                p[:] = np_
                if cur > best:
                    best = cur
                    best_psi[:] = psi
                    best_vs[:] = vs
                    best_p[:] = p
            else:
                stall += 1
        if (not rate_scheme) or steps <= warmup_steps:
            if stall >= stall_window:
                sigma *= 0.5
                stall = 0
                if sigma < sigma_min:
                    break
        if steps % tau_check_every == 0:
            if cur < last_check:
                tau *= tau_down
            elif cur > last_check:
                tau *= tau_up
            last_check = cur
            if rate_scheme and steps > warmup_steps:
                rate = acc_win / tau_check_every
                if rate > 0.25:
                    sigma *= 1.25
                elif rate < 0.15:
                    sigma *= 0.8
            acc_win = 0
        if trace_every > 0 and steps % trace_every == 0 and ntr < tr_steps.shape[0]:
            tr_steps[ntr] = steps
            tr_vals[ntr] = cur
            ntr += 1
    return best, steps, sigma, tau, accepted, degen, ntr


@njit(cache=True)
def _dchi_value(u, cmat, d_a, d_b, rhos0, rhos1, rho_bar, pbuf, n2buf):
    k, dim = cmat.shape
    tot = 0.0
    for i in range(k):
        n2 = 0.0
        for j in range(dim):
            n2 += cmat[i, j].real * cmat[i, j].real + cmat[i, j].imag * cmat[i, j].imag
        n2buf[i] = n2
        tot += n2
    for i in range(k):
        pbuf[i] = n2buf[i] / tot
    for i in range(k):
        if n2buf[i] == 0.0:
            for r in range(d_b):
                for c in range(d_b):
                    rhos0[i, r, c] = 0.0j
                    rhos1[i, r, c] = 0.0j
            continue
        m = cmat[i].reshape(d_a, d_b)
        _rho_bob(m, rhos0[i])
        after = np.dot(u, cmat[i])
        _rho_bob(after.reshape(d_a, d_b), rhos1[i])
        inv = 1.0 / n2buf[i]
        for r in range(d_b):
            for c in range(d_b):
                rhos0[i, r, c] *= inv
                rhos1[i, r, c] *= inv
    delta = 0.0
    for which in range(2):
        rhos = rhos0 if which == 0 else rhos1
        for r in range(d_b):
            for c in range(d_b):
                acc = 0.0j
                for i in range(k):
                    acc += pbuf[i] * rhos[i, r, c]
                rho_bar[r, c] = acc
        chi = _entropy_from_eigs(np.linalg.eigvalsh(rho_bar))
        for i in range(k):
            if pbuf[i] >= PROB_FLOOR:
                chi -= pbuf[i] * _entropy_from_eigs(np.linalg.eigvalsh(rhos[i]))
        delta += chi if which == 1 else -chi
    return delta


@njit(cache=True)
def anneal_dchi(rng, u, cmat, d_a, d_b,
                sigma0, sigma_min, stall_window, tau0, tau_check_every,
                tau_down, tau_up, rate_scheme, warmup_steps, max_steps,
                best_c,
                trace_every, tr_steps, tr_vals):
    """Finite-temperature anneal of the Holevo gain over free ensembles.

    cmat rows are unnormalized member vectors; squared norms carry the
    ensemble weights, so there is no separate probability block.
    """
    k, dim = cmat.shape
    rhos0 = np.empty((k, d_b, d_b), np.complex128)
    rhos1 = np.empty((k, d_b, d_b), np.complex128)
    rho_bar = np.empty((d_b, d_b), np.complex128)
    pbuf = np.empty(k, np.float64)
    n2buf = np.empty(k, np.float64)
    nc = np.empty_like(cmat)
    cur = _dchi_value(u, cmat, d_a, d_b, rhos0, rhos1, rho_bar, pbuf, n2buf)
    best = cur
    best_c[:] = cmat
    sigma = sigma0
    tau = tau0
    stall = 0
    accepted = 0
    acc_win = 0
    degen = 0
    last_check = cur
    ntr = 0
    if trace_every > 0:
        tr_steps[0] = 0
        tr_vals[0] = cur
        ntr = 1
    steps = 0
    for step in range(max_steps):
        steps = step + 1
        tot = 0.0
        for i in range(k):
            g = rng.normal(0.0, sigma, dim)
            th = rng.uniform(0.0, TWO_PI, dim)
            for j in range(dim):
                nc[i, j] = cmat[i, j] + g[j] * complex(np.cos(th[j]), np.sin(th[j]))
                tot += nc[i, j].real * nc[i, j].real + nc[i, j].imag * nc[i, j].imag
        if tot <= 1e-24:
            degen += 1
        else:
            val = _dchi_value(u, nc, d_a, d_b, rhos0, rhos1, rho_bar, pbuf, n2buf)
            dv = val - cur
            if dv > 0.0 or rng.random() < np.exp(dv / tau):
                cur = val
                accepted += 1
                acc_win += 1
                stall = 0
                cmat[:] = nc
                if cur > best:
                    best = cur
                    best_c[:] = cmat
            else:
                stall += 1
        if (not rate_scheme) or steps <= warmup_steps:
            if stall >= stall_window:
                sigma *= 0.5
                stall = 0
                if sigma < sigma_min:
                    break
        if steps % tau_check_every == 0:
            if cur < last_check:
                tau *= tau_down
            elif cur > last_check:
                tau *= tau_up
            last_check = cur
            if rate_scheme and steps > warmup_steps:
                rate = acc_win / tau_check_every
                if rate > 0.25:
                    sigma *= 1.25
                elif rate < 0.15:
                    sigma *= 0.8
            acc_win = 0
        if trace_every > 0 and steps % trace_every == 0 and ntr < tr_steps.shape[0]:
            tr_steps[ntr] = steps
            tr_vals[ntr] = cur
            ntr += 1
    return best, steps, sigma, tau, accepted, degen, ntr
