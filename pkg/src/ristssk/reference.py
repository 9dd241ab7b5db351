"""Slow, loop-based reference implementations used as independent oracles.

These follow the detector definitions element by element with plain Python
arithmetic on complex scalars. They share no code with the vectorized paths.
"""

import cmath


def cascade_loop(G, H, phi, l):
    """s_n = sum_i kappa_{i,n} e^{j phi_i} g_{l,i}; ``l`` is 1-based."""
    N, Nr = len(H), len(H[0])
    out = []
    for n in range(Nr):
        acc = 0j
        for i in range(N):
            acc += complex(H[i][n]) * cmath.exp(1j * float(phi[i])) * complex(G[l - 1][i])
        out.append(acc)
    return out


def correlate_loop(Y, c):
    """Per-antenna correlation sum_u Y[n][u] c[u]."""
    return [sum(complex(Y[n][u]) * float(c[u]) for u in range(len(c))) for n in range(len(Y))]


def detect_code_loop(Y, codewords):
    """argmax_m ||Y c_m||^2 with first-index tie-break; returns 1-based m."""
    best, best_m = -1.0, 0
    for m, c in enumerate(codewords):
        z = correlate_loop(Y, c)
        metric = sum(abs(v) ** 2 for v in z)
        if metric > best:
            best, best_m = metric, m
    return best_m + 1


def detect_antenna_loop(Y, c_hat, G, H, phi):
    """argmin_l ||Y c_hat - s_l||^2 with first-index tie-break; returns 1-based l."""
    z = correlate_loop(Y, c_hat)
    best, best_l = float("inf"), 0
    for l in range(1, len(G) + 1):
        s = cascade_loop(G, H, phi, l)
        dist = sum(abs(z[n] - s[n]) ** 2 for n in range(len(z)))
        if dist < best:
            best, best_l = dist, l
    return best_l


def detect_ml_loop(Y, codewords, G, H, phi):
    """Exhaustive argmin_{l,m} ||Y - s_l c_m^T||_F^2 on the raw residual."""
    best, best_pair = float("inf"), (0, 0)
    for l in range(1, len(G) + 1):
        s = cascade_loop(G, H, phi, l)
        for m, c in enumerate(codewords, start=1):
            resid = 0.0
            for n in range(len(Y)):
                for u in range(len(c)):
                    resid += abs(complex(Y[n][u]) - s[n] * float(c[u])) ** 2
            if resid < best:
                best, best_pair = resid, (l, m)
    return best_pair
