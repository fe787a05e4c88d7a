"""Brute-force reference implementations, independent of the library's search."""

import numpy as np


def naive_lambda_2d(X):
    X = np.asarray(X)
    n = X.shape[0]
    lam = np.zeros((n, n), dtype=int)
    for r in range(n):
        for c in range(n):
            k = 1
            while True:
                if k > min(r, c) + 1:
                    break  # block no longer fits at v: every feasible size recurred
                block = X[r - k + 1 : r + 1, c - k + 1 : c + 1]
                found = False
                for ur in range(k - 1, r + 1):
                    for uc in range(k - 1, c + 1):
                        if (ur, uc) == (r, c):
                            continue
                        if np.array_equal(X[ur - k + 1 : ur + 1, uc - k + 1 : uc + 1], block):
                            found = True
                            break
                    if found:
                        break
                if not found:
                    break
                k += 1
            lam[r, c] = k
    return lam


def naive_lambda_1d(x):
    x = list(x)
    T = len(x)
    lam = []
    for t in range(1, T + 1):
        k = 1
        while k <= t - 1:
            s = x[t - k : t]
            if not any(x[u - k : u] == s for u in range(k, t)):
                break
            k += 1
        lam.append(k)
    return np.array(lam)
