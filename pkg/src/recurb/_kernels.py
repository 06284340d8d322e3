"""Per-point tensor contraction kernels.

Each kernel exists twice: an ``np.einsum`` version and an explicit-loop
version compiled with ``numba.njit``.  The numba path is used when numba is
importable and ``RECURB_NUMBA`` is not set to ``0``.

Index layout (m = model coordinate, n = intrinsic dim, p = codimension):

    d1[i, a], d2[i, j, a]         chart jets
    normals[s, a]                 orthonormal normal frame
    gamma[k, i, j]                Gamma^k_ij
    dgamma[m, k, i, j]            d_m Gamma^k_ij
    b[s, i, j]                    b^s_ij
    db[k, s, i, j]                d_k b^s_ij
    omega[i, s, t]                <d_i n_s, n_t>
    domega[m, i, s, t]            d_m omega[i, s, t]
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("RECURB_NUMBA", "1") != "0"


def _njit(fn):
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True)(fn)


# -- numpy ------------------------------------------------------------------

def gram_np(vecs, sig):
    return np.einsum("ia,ja,a->ij", vecs, vecs, sig)


def christoffel_np(d1, d2, g_inv, sig):
    return np.einsum("kl,ija,la,a->kij", g_inv, d2, d1, sig)


def second_form_np(d2, normals, sig):
    return np.einsum("ija,sa,a->sij", d2, normals, sig)


def riemann_np(gamma, dgamma, g):
    # R(d_i, d_j) d_k = (d_i G^m_jk - d_j G^m_ik + G^p_jk G^m_ip - G^p_ik G^m_jp) d_m
    t = (np.einsum("imjk->ijkm", dgamma) - np.einsum("jmik->ijkm", dgamma)
         + np.einsum("pjk,mip->ijkm", gamma, gamma) - np.einsum("pik,mjp->ijkm", gamma, gamma))
    return np.einsum("ijkm,ml->ijkl", t, g)


def nabla_b_np(b, db, gamma, omega):
    out = np.einsum("ksij->skij", db)
    out = out + np.einsum("kts,tij->skij", omega, b)
    out = out - np.einsum("lki,slj->skij", gamma, b)
    out = out - np.einsum("lkj,sil->skij", gamma, b)
    return out


def normal_curvature_np(omega, domega):
    # out[s, t, i, j] = <R_perp(d_i, d_j) n_s, n_t>
    t1 = np.einsum("ijst->stij", domega) - np.einsum("jist->stij", domega)
    quad = np.einsum("irt,jsr->stij", omega, omega)
    return t1 + quad - np.einsum("stij->stji", quad)


def gauss_rhs_np(g, b, c):
    # c (g_il g_jk - g_ik g_jl) + sum_s (b_il b_jk - b_ik b_jl)
    gg = np.einsum("il,jk->ijkl", g, g) - np.einsum("ik,jl->ijkl", g, g)
    bb = np.einsum("sil,sjk->ijkl", b, b) - np.einsum("sik,sjl->ijkl", b, b)
    return c * gg + bb


# -- numba ------------------------------------------------------------------

@_njit
def gram_nb(vecs, sig):
    k, m = vecs.shape
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(i, k):
            acc = 0.0
            for a in range(m):
                acc += sig[a] * vecs[i, a] * vecs[j, a]
            out[i, j] = acc
            out[j, i] = acc
    return out


@_njit
def christoffel_nb(d1, d2, g_inv, sig):
    n, m = d1.shape
    proj = np.zeros((n, n, n))
    for i in range(n):
        for j in range(i, n):
            for l in range(n):
                acc = 0.0
                for a in range(m):
                    acc += sig[a] * d2[i, j, a] * d1[l, a]
                proj[i, j, l] = acc
                proj[j, i, l] = acc
    out = np.zeros((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                acc = 0.0
                for l in range(n):
                    acc += g_inv[k, l] * proj[i, j, l]
                out[k, i, j] = acc
    return out


@_njit
def second_form_nb(d2, normals, sig):
    n = d2.shape[0]
    p, m = normals.shape
    out = np.zeros((p, n, n))
    for s in range(p):
        for i in range(n):
            for j in range(i, n):
                acc = 0.0
                for a in range(m):
                    acc += sig[a] * d2[i, j, a] * normals[s, a]
                out[s, i, j] = acc
                out[s, j, i] = acc
    return out


@_njit
def riemann_nb(gamma, dgamma, g):
    n = gamma.shape[0]
    t = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for mm in range(n):
                    acc = dgamma[i, mm, j, k] - dgamma[j, mm, i, k]
                    for q in range(n):
                        acc += gamma[q, j, k] * gamma[mm, i, q] - gamma[q, i, k] * gamma[mm, j, q]
                    t[i, j, k, mm] = acc
    out = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    acc = 0.0
                    for mm in range(n):
                        acc += t[i, j, k, mm] * g[mm, l]
                    out[i, j, k, l] = acc
    return out


@_njit
def nabla_b_nb(b, db, gamma, omega):
    p, n, _ = b.shape
    out = np.zeros((p, n, n, n))
    for s in range(p):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    acc = db[k, s, i, j]
                    for t in range(p):
                        acc += omega[k, t, s] * b[t, i, j]
                    for l in range(n):
                        acc -= gamma[l, k, i] * b[s, l, j] + gamma[l, k, j] * b[s, i, l]
                    out[s, k, i, j] = acc
    return out


@_njit
def normal_curvature_nb(omega, domega):
    n, p, _ = omega.shape
    out = np.zeros((p, p, n, n))
    for s in range(p):
        for t in range(p):
            for i in range(n):
                for j in range(n):
                    acc = domega[i, j, s, t] - domega[j, i, s, t]
                    for r in range(p):
                        acc += omega[i, r, t] * omega[j, s, r] - omega[j, r, t] * omega[i, s, r]
                    out[s, t, i, j] = acc
    return out


@_njit
def gauss_rhs_nb(g, b, c):
    n = g.shape[0]
    p = b.shape[0]
    out = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    acc = c * (g[i, l] * g[j, k] - g[i, k] * g[j, l])
                    for s in range(p):
                        acc += b[s, i, l] * b[s, j, k] - b[s, i, k] * b[s, j, l]
                    out[i, j, k, l] = acc
    return out


NAMES = ("gram", "christoffel", "second_form", "riemann", "nabla_b",
         "normal_curvature", "gauss_rhs")
NUMPY = {name: globals()[name + "_np"] for name in NAMES}
NUMBA = {name: globals()[name + "_nb"] for name in NAMES}
ACTIVE = NUMBA if USE_NUMBA else NUMPY
BACKEND = "numba" if USE_NUMBA else "numpy"

gram = ACTIVE["gram"]
christoffel = ACTIVE["christoffel"]
second_form = ACTIVE["second_form"]
riemann = ACTIVE["riemann"]
nabla_b = ACTIVE["nabla_b"]
normal_curvature = ACTIVE["normal_curvature"]
gauss_rhs = ACTIVE["gauss_rhs"]
