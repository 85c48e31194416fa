"""Independent arbitrary-precision oracle values frozen into the test suite.

Run with `python3 gen_values.py`; requires mpmath. Every constant printed here
appears verbatim in a test under crates/core/tests or a unit test module.
"""
from mpmath import (mp, mpf, mpc, zeta, log, pi, quad, siegeltheta, siegelz,
                    zetazero, nzeros, findroot, sqrt, e, exp, floor, binomial, inf)
mp.dps = 30

def show(name, v):
    print(f"{name} = {mp.nstr(v, 22)}")

show("zeta(1/2)", zeta(mpf(1) / 2))
z = zeta(mpc(1.5, 1000))
show("zeta(3/2+1000i).re", z.real); show("zeta(3/2+1000i).im", z.imag)
z = zeta(mpc(0.5, 20))
show("log|zeta(1/2+20i)|", log(abs(z)))
for (s, t) in [(0.5, 14.134725), (0.75, 123.25), (2.5, 4000.5), (1.0, 7.0), (0.5, 9999.0), (12.0, 50.0)]:
    z = zeta(mpc(s, t))
    show(f"zeta({s}+{t}i).re", z.real); show(f"zeta({s}+{t}i).im", z.imag)
show("theta(100)", siegeltheta(100))
show("theta(10)", siegeltheta(10))
show("theta(1000)", siegeltheta(1000))
show("theta zero", findroot(siegeltheta, 17.8))
show("gamma1", zetazero(1).imag)
show("gamma2", zetazero(2).imag)
print("N(100) =", nzeros(100))
print("N(1000) =", nzeros(1000))
print("N(5000) =", nzeros(5000))
for t in [10000.5, 10500.25, 20000.25, 100000.3, 500000.7]:
    show(f"Z({t})", siegelz(t))
# S(T) = N(T) - theta(T)/pi - 1 for T away from zeros
for T in [10, 100, 1000, 2500.5]:
    show(f"S({T})", nzeros(T) - siegeltheta(T) / pi - 1)
C = quad(lambda s: log(abs(zeta(s))), [0.5, 0.75, 1, 1.5, 2, 5, 10, 40, inf]) / pi
show("C", C)
def s1(T):
    return quad(lambda s: log(abs(zeta(mpc(s, T)))), [0.5, 0.6, 0.75, 1, 1.5, 2, 3, 5, 10, 20, 40, inf]) / pi
for T in [10, 100, 300, 500, 1000]:
    show(f"S1({T})", s1(T))

# moment lower bound closed forms, log-space: ln of first term (c k^1/2/log k)^{2k} H and 3k tau
def lem4(k, tau, H):
    c = 1 / (5 * sqrt(10 * e))
    first = 2 * k * log(c * sqrt(k) / log(k)) + log(H)
    sub = 3 * k * tau
    odd = 3 * k * tau + mpf(3) / 2 * tau
    val = exp(first) - exp(sub)
    return first, sub, odd, val
for (k, tau, H) in [(2, 4, 1e4), (2, 1, 1e4), (3, 5, 1e6), (4, 6.5, 1e8), (5, 8, 1e12), (2, 2.5, 20),
                    (7, 10, 1e30), (10, 12, 1e50), (12, 20, 1e100), (3, 3.3, 1e3)]:
    f, s, o, v = lem4(k, mpf(tau), mpf(H))
    print(f"lem4 k={k} tau={tau} H={H}: ln_first={mp.nstr(f, 22)} ln_sub={mp.nstr(s, 22)} ln_odd={mp.nstr(o, 22)} value={mp.nstr(v, 22)} hyp={(2*k*log(k))**2 < exp(mpf(4)/5*tau)}")

# derive_params at T=1e6, eps=1e-4
T = mpf(10) ** 6; eps = mpf("1e-4")
H = T ** (mpf(27) / 82 + eps); L = log(T); LL = log(L)
show("H(1e6,1e-4)", H)
show("k_raw(1e6,1e-4)", eps**2 / 1000 * L ** (mpf(2) / 3) / LL ** (mpf(4) / 3))
show("B(1e6,1e-4)", eps / (4000 * pi) * L ** (mpf(1) / 3) / LL ** (mpf(5) / 3))
T = mpf(10) ** 5
L = log(T); LL = log(L)
show("B(1e5,1e-4)", eps / (4000 * pi) * L ** (mpf(1) / 3) / LL ** (mpf(5) / 3))
# remainder moment bound, ln-space, at m=5, tau=3, eps=5e-4, lnT=1e6, lnH = (27/82+eps)*lnT
m = 5; tau = mpf(3); eps = mpf("5e-4"); lnT = mpf(10) ** 6; lnH = (mpf(27) / 82 + eps) * lnT
a = m * log(25); b = 3 * log(lnT) + m * log(50 * tau * m * m / (eps**3 * lnT))
show("lemma3 ln_rhs", lnH + log(exp(a) + exp(b)))
