"""Exact integer linear algebra for rank-2 sublattices of Z^2.

Vectors are (int, int) tuples, a lattice is a pair of basis vectors.
Everything stays in integer arithmetic; no floats are used in any decision.
"""

from __future__ import annotations

from math import gcd

from .errors import DomainError

Vec = tuple[int, int]


def det2(u: Vec, v: Vec) -> int:
    return u[0] * v[1] - u[1] * v[0]


def add(u: Vec, v: Vec) -> Vec:
    return (u[0] + v[0], u[1] + v[1])


def sub(u: Vec, v: Vec) -> Vec:
    return (u[0] - v[0], u[1] - v[1])


def scale(u: Vec, k: int) -> Vec:
    return (u[0] * k, u[1] * k)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) = s*a + t*b, g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf(u: Vec, v: Vec) -> tuple[Vec, Vec]:
    """Canonical basis ((a,0),(b,c)) of the lattice spanned by u, v.

    a > 0, c > 0, 0 <= b < a; unique per lattice, so it doubles as an
    identity key for sublattices.
    """
    d = det2(u, v)
    if d == 0:
        raise DomainError(f"vectors {u}, {v} do not span a rank-2 lattice")
    g, s, t = xgcd(u[1], v[1])
    if g == 0:
        raise DomainError(f"degenerate lattice basis {u}, {v}")
    w2 = add(scale(u, s), scale(v, t))          # second coordinate g > 0
    w1 = sub(scale(u, v[1] // g), scale(v, u[1] // g))  # second coordinate 0
    a = abs(w1[0])
    c = w2[1]
    b = w2[0] % a
    assert a * c == abs(d)
    return ((a, 0), (b, c))


def contains(basis: tuple[Vec, Vec], w: Vec) -> bool:
    """Exact membership of w in the lattice spanned by basis (Cramer's rule)."""
    v1, v2 = basis
    d = det2(v1, v2)
    return det2(w, v2) % d == 0 and det2(v1, w) % d == 0


def coset_reps(basis: tuple[Vec, Vec]) -> list[Vec]:
    """One representative per coset of Z^2 / lattice, in row-major order."""
    (a, _), (_, c) = hnf(*basis)
    return [(x, y) for y in range(c) for x in range(a)]


def reduce_mod(hnf_basis: tuple[Vec, Vec], w: Vec) -> Vec:
    """Canonical coset representative of w modulo an HNF lattice basis."""
    (a, _), (b, c) = hnf_basis
    k = w[1] // c
    return ((w[0] - k * b) % a, w[1] - k * c)


def min_axis_periods(basis: tuple[Vec, Vec]) -> tuple[int, int]:
    """Smallest k1 with (k1,0) in the lattice and k2 with (0,k2) in it."""
    (a, _), (b, c) = hnf(*basis)
    return a, c * (a // gcd(a, b if b else a))


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def gauss_reduce(u: Vec, v: Vec, gram: tuple[int, int, int]) -> tuple[Vec, Vec]:
    """Lagrange-reduced basis w.r.t. the quadratic form given by gram.

    gram = (gaa, gab, gbb) encodes Q(x,y) = gaa*x^2 + gab*x*y + gbb*y^2.
    """
    gaa, gab, gbb = gram

    def q(w):
        return gaa * w[0] * w[0] + gab * w[0] * w[1] + gbb * w[1] * w[1]

    def dot(w, z):  # doubled polarization, stays integral
        return 2 * gaa * w[0] * z[0] + gab * (w[0] * z[1] + w[1] * z[0]) + 2 * gbb * w[1] * z[1]

    if q(u) > q(v):
        u, v = v, u
    while True:
        n = dot(u, u)
        t = dot(u, v)
        k = (2 * t + n) // (2 * n)  # nearest integer to t/n (floor on ties)
        v = sub(v, scale(u, k))
        if q(v) >= q(u):
            return u, v
        u, v = v, u
