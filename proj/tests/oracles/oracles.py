#!/usr/bin/env python3
"""Independent high-precision oracles for the frozen values in the C++ tests.

Everything here uses mpmath closed forms or brute-force quadrature and shares
no code path with the library. Run it to regenerate the numbers quoted in
tests/*.cpp.
"""
import mpmath as mp

mp.mp.dps = 40
E = mp.e


def gaussian_J(k):
    return mp.mpf(2) ** ((k - 1) / mp.mpf(2)) * mp.gamma((k + 1) / mp.mpf(2))


def bisect(f, lo, hi, it=200):
    flo = f(lo)
    for _ in range(it):
        mid = (lo + hi) / 2
        if (f(mid) >= 0) == (flo >= 0):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def gaussian_lambdas(m):
    t0 = mp.sqrt(m)
    phi = lambda t: t * t / 2
    inner = bisect(lambda x: phi(t0 * (1 - x)) - phi(t0) - m * mp.log(1 - x) - 1,
                   mp.mpf('1e-30'), 1 - mp.mpf('1e-30'))
    outer = bisect(lambda x: phi(t0 * (1 + x)) - phi(t0) - m * mp.log(1 + x) - 1,
                   mp.mpf('1e-30'), mp.mpf(10))
    return inner, outer


def theorem_bound_gaussian(d):
    m = d - 1
    t0 = mp.sqrt(m)
    g = t0 ** m * mp.exp(-t0 ** 2 / 2)
    lam = gaussian_J(m) / (t0 * g)
    return mp.sqrt(m) / (mp.sqrt(lam) * t0)


def prob_bound_gaussian(d):
    m = d - 1
    e1 = gaussian_J(m + 1) / gaussian_J(m)
    var = gaussian_J(m + 2) / gaussian_J(m) - e1 ** 2
    return mp.sqrt(d) / (mp.sqrt(e1) * var ** mp.mpf(0.25))


def cube_moments(d):
    # E|X| for X uniform on [-1/2,1/2]^d via E sqrt(S) = (1/(2 sqrt pi)) int (1-phi(u)^d) u^{-3/2} du
    phi = lambda u: mp.sqrt(mp.pi / u) * mp.erf(mp.sqrt(u) / 2) if u > 0 else mp.mpf(1)
    f = lambda u: (1 - phi(u) ** d) * u ** mp.mpf(-1.5)
    ex = mp.quad(f, [0, 1, 10, 100, mp.inf]) / (2 * mp.sqrt(mp.pi))
    return ex, mp.mpf(d) / 12 - ex ** 2


def cap_probability(m, r, rho):
    k = (mp.mpf(m) - 2) / 2
    f = lambda t: (1 - t * t / (r * r)) ** k
    if rho >= r:
        return mp.mpf(0)
    return mp.quad(f, [rho, r]) / mp.quad(f, [-r, r])


def main():
    print("gaussian J2 =", gaussian_J(2), " log =", mp.log(gaussian_J(2)))
    li, lo = gaussian_lambdas(2)
    print("gaussian m=2 lambda_i =", li, " lambda_o =", lo)
    print("gaussian m=2 t0=sqrt2: xi1 =", mp.e * gaussian_J(2) / 2,
          " sphere =", 2 * mp.exp(-1) / gaussian_J(2))
    print("gaussian d=3 E|X| =", gaussian_J(3) / gaussian_J(2))
    for d in (65,):
        print("gaussian d=%d theorem_bound/d^1/4 =" % d, theorem_bound_gaussian(d) / mp.mpf(d) ** 0.25,
              " prob/d^1/4 =", prob_bound_gaussian(d) / mp.mpf(d) ** 0.25)
    # ball R=1, d=10
    m = 9
    ex = mp.mpf(10) / 11
    var = mp.mpf(10) / 12 - ex ** 2
    print("ball d=10 E =", ex, " Var =", var, " prob bound =", mp.sqrt(10) / (mp.sqrt(ex) * var ** 0.25))
    li = 1 - mp.exp(-mp.mpf(1) / 9)
    rho = mp.mpf(1) / 5 / mp.sqrt(li * 9)
    n_real = 3 * rho * (1 - rho ** 2 / (1 + li) ** 2) ** (-mp.mpf(9) / 2)
    print("ball d=10 lambda_i =", li, " rho =", rho, " N_real =", n_real)
    # half-space for ball measure at rho, d = 10: C * m nu_m * int_0^{sqrt(1-rho^2)} s^{m-1} ds
    nu = lambda k: mp.pi ** (mp.mpf(k) / 2) / mp.gamma(mp.mpf(k) / 2 + 1)
    hs = lambda d, r: m * nu(m) * (1 - r * r) ** (mp.mpf(m) / 2) / m / (d * nu(d) / 10)
    print("ball d=10 halfspace(rho) =", hs(10, rho))
    # gaussian tail, m = 2, x = 1
    psi1 = 4 - 1 - 2 * mp.log(2)
    t0 = mp.sqrt(2)
    tail = mp.quad(lambda t: t * t * mp.exp(-t * t / 2), [2 * t0, mp.inf])
    bound = t0 * 2 * mp.exp(-1) / (psi1 * mp.exp(psi1))
    print("gaussian tail m=2 x=1: psi =", psi1, " tail =", tail, " bound =", bound)
    for d in (16, 64, 256, 1024):
        ex, var = cube_moments(d)
        print("cube d=%d E|X| =" % d, ex, " E/sqrt d =", ex / mp.sqrt(d), " Var =", var)
    # Proposition spot check constant
    for m in (64, 256):
        t0 = mp.sqrt(m)
        worst = mp.inf
        for i in range(201):
            x = mp.log(m) / mp.sqrt(m) * i / 200
            t = t0 * (1 + x) / (1 + mp.mpf(1) / m) ** 2
            lam = mp.sqrt(1 + 2 / t ** 2) - 1
            psi = ((1 + x) ** 2 - 1) * m / 2 - m * mp.log(1 + x)
            worst = min(worst, lam * m * (psi + 2))
        print("prop spot check m=%d min =" % m, worst)
    # separation-probability constant K
    for m, r0 in ((15, mp.sqrt(15)), (63, mp.sqrt(63)), (255, mp.sqrt(255))):
        worst = 0
        for rho_frac in (0.1, 0.2, 0.3, 0.5):
            rho = rho_frac * r0
            for i in range(11):
                r = r0 * (mp.mpf(0.6) + mp.mpf(0.08) * i)
                p = cap_probability(m, r, rho)
                ref = r / (mp.sqrt(m) * rho) * (1 - rho ** 2 / r ** 2) ** (mp.mpf(m) / 2)
                worst = max(worst, p / ref)
        print("cap ratio m=%d max p/ref =" % m, worst)
    print("cap m=2 r=2 rho=0.5:", cap_probability(2, 2, mp.mpf(0.5)))
    print("cap m=9 r=1 rho=0.3:", cap_probability(9, 1, mp.mpf(0.3)))
    eps = mp.mpf('1e-5')
    m = 50
    s = (m + 1) / (1 - (1 - eps) ** (m + 1))
    jm = lambda k: (1 - (1 - eps) ** (k + 1)) / (k + 1)
    ex = jm(m + 1) / jm(m)
    var = jm(m + 2) / jm(m) - ex ** 2
    print("shell eps=1e-5 d=51 sphere =", s, " E =", ex, " Var =", var,
          " prob bound =", mp.sqrt(51) / (mp.sqrt(ex) * var ** 0.25))


if __name__ == "__main__":
    main()
