# Independent reference values for the unit tests (mpmath / scipy). Run:
#   python3 tests/oracles/oracles.py
# and paste the printed numbers into the matching test files.
import mpmath as mp
from scipy.special import wofz

mp.mp.dps = 30
I = mp.mpc(0, 1)


def kappa_bound(p):
    # sqrt(1 - ip) continued from Re p > 0: open channels are outgoing
    w = 1 - I * p
    k = mp.sqrt(w)
    if mp.re(w) < 0 and mp.im(k) > 0:
        k = -k
    return k


def kplus(p, a):
    k = kappa_bound(p)
    return (k + mp.exp(-2 * a * k) - 1) / (k * (k - 1))


def kminus(p, a):
    k = kappa_bound(p)
    return mp.exp(-2 * a * k) / (k - 1)


def K_time(t, a, minus):
    ph = mp.exp(I * mp.pi / 4)
    chirp = I * a * a / t if minus else 0
    R = I * mp.exp(-2 * a) * mp.erfc(mp.exp(-I * mp.pi / 4) * (a / mp.sqrt(t) - I * mp.sqrt(t)))
    return ph * mp.exp(chirp - I * t) / mp.sqrt(mp.pi * t) + R


def section(name):
    print("\n#", name)


section("Faddeeva w(z), scipy.special.wofz")
for z in [complex(0.5, 0.5), complex(-3.0, 0.2), complex(10.0, 1e-3), complex(1.0, -0.7)]:
    w = wofz(z)
    print(f"{{{z.real!r}, {z.imag!r}, {float(w.real)!r}, {float(w.imag)!r}}},")

section("Laplace kernels at p = 3i and p = 0.2 - 0.5i, a = 0.59 (principal branch)")
for p in [3 * I, mp.mpc(0.2, -0.5)]:
    for f in (kplus, kminus):
        v = f(p, mp.mpf("0.59"))
        print(f.__name__, mp.nstr(p, 5), mp.nstr(mp.re(v), 17), mp.nstr(mp.im(v), 17))

section("time kernels (closed form in mpmath), checked against the forward transform at p = 3")
a = mp.mpf("0.59")
# R(t) carries e^{i a^2/t} at small t; along tau = u^2 e^{-i pi/4} that chirp decays instead
e = mp.exp(-I * mp.pi / 4)
for minus in (False, True):
    F = mp.quad(lambda u: 2 * u * e * mp.exp(-3 * u * u * e) * K_time(u * u * e, a, minus), mp.linspace(0, 6, 25))
    ref = kminus(3, a) if minus else kplus(3, a)
    assert abs(F - ref) < 1e-15, (F, ref)
for t in [mp.mpf("0.3"), mp.mpf(2), mp.mpf(25)]:
    for minus in (False, True):
        v = K_time(t, a, minus)
        print("minus" if minus else "plus", t, mp.nstr(mp.re(v), 17), mp.nstr(mp.im(v), 17))


section("U1 Floquet pole, a = 0.59, omega = 1.5, r = 0.1 and 0.05 (scalar continued fraction)")


def pole_u1(a, r, om, guess, M=40):
    def F(p0):
        al = lambda n: I * r / 2 * kplus(p0 + I * om * n, a)  # c = +1
        A = 0
        for n in range(M, 0, -1):
            A = al(n) / (1 + al(n) * A)
        B = 0
        for n in range(-M, 0):
            B = -al(n) / (1 - al(n) * B)
        return p0 * (1 - al(0) * (B - A))
    return mp.findroot(F, guess, tol=1e-28)


for r in [mp.mpf("0.1"), mp.mpf("0.05")]:
    x = pole_u1(mp.mpf("0.59"), r, mp.mpf("1.5"), mp.mpc(-4e-4, 1e-3) * (r / mp.mpf("0.1")) ** 2)
    print("r", r, "xi0", mp.nstr(mp.re(x), 17), mp.nstr(mp.im(x), 17), "Gamma", mp.nstr(-2 * mp.re(x), 17))


section("U1 stabilization: g0 at a = 0.59, omega_s at r = 1")
a = mp.mpf("0.59")
kap = mp.findroot(lambda k: mp.exp(-2 * a * k) - 1 + k, 0.3)
g0 = kap ** 2 - 1
print("g0", mp.nstr(g0, 17))


def defect(kn, r, nmax=80):
    rho = mp.mpf(0)
    for n in range(nmax, 1, -1):
        rho = 1 / (2 / (r * kn(n)) - rho)  # rho_{n-1}
    return 1 - r * kn(1) / 2 * rho


def kplus_real(g, n, om, a):
    k = mp.sqrt(1 + g + om * n)
    return (k + mp.exp(-2 * a * k) - 1) / (k * (k - 1))


ws = mp.findroot(lambda om: defect(lambda n: kplus_real(g0, n, om, a), 1), 1.09)
print("omega_s", mp.nstr(ws, 17))

section("free trap: a = 4, omega = 1.5, N = 1")
a, om = mp.mpf(4), mp.mpf("1.5")
g0f = -(mp.pi / a) ** 2


def kfree(n):
    k = mp.sqrt(g0f + om * n)
    return (1 + (-1) ** (n + 1) * mp.exp(-2 * a * k)) / k


rs = mp.findroot(lambda r: defect(kfree, r), 1.89)
print("g0", mp.nstr(g0f, 17), "r_s", mp.nstr(rs, 17))

section("free gaussian packet: psi0(x, t) from the momentum integral, width 1, x0 = 0.5, k0 = 0.7")
w, x0, k0 = mp.mpf(1), mp.mpf("0.5"), mp.mpf("0.7")


def Fk(k):
    # Fourier transform of (2 pi w^2)^{-1/4} exp(-(x-x0)^2/(4w^2) + i k0 (x - x0))
    return (2 * w * w / mp.pi) ** mp.mpf(0.25) * mp.exp(-w * w * (k - k0) ** 2 - I * k * x0)


# |F| < 1e-60 outside |k| < 12; mp.quad over (-inf, inf) loses digits on the oscillation
for x, t in [(mp.mpf(3), mp.mpf(5)), (mp.mpf(-2), mp.mpf("0.5"))]:
    psi = mp.quad(lambda k: Fk(k) * mp.exp(I * k * x - I * k * k * t), mp.linspace(-12, 12, 49)) / mp.sqrt(2 * mp.pi)
    print("x", x, "t", t, mp.nstr(mp.re(psi), 17), mp.nstr(mp.im(psi), 17))
# localization in |x| <= 13 at t = 40 (x0 = 0, k0 = 0), from the density of psi0
L, t = 13, 40
s = w * w + I * t
dens = lambda x: abs((2 * mp.pi * w * w) ** mp.mpf(-0.25) * mp.sqrt(w * w / s) * mp.exp(-x * x / (4 * s))) ** 2
print("P(L=13, t=40)", mp.nstr(mp.quad(dens, [-L, 0, L]), 17))
