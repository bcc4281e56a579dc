# Independent high-precision reference values, computed with mpmath.
# Output is frozen into tests/oracle_values.hpp; rerun to regenerate.
import mpmath as mp

mp.mp.dps = 40

def xi(s):
    return mp.mpf(1)/2 * s * (s - 1) * mp.pi ** (-s / 2) * mp.gamma(s / 2) * mp.zeta(s)

def xi_prime(s):
    return mp.diff(xi, s)

def bump(x):
    return mp.exp(-1 / (1 - x * x)) if abs(x) < 1 else mp.mpf(0)

print("// ---- generated by tests/oracles/mp_oracles.py ----")
print("bump_integral", mp.nstr(mp.quad(bump, [-1, 0, 1]), 25))
print("xi_half", mp.nstr(xi(mp.mpf(1) / 2), 25))
for s in [mp.mpc(2, 0), mp.mpc(0.5, 10), mp.mpc(0.3, 25.5), mp.mpc(1.7, -40.25), mp.mpc(0.5, 100), mp.mpc(3, 7)]:
    v = xi(s); d = xi_prime(s)
    print("xi", mp.nstr(s.real, 10), mp.nstr(s.imag, 10), mp.nstr(v.real, 25), mp.nstr(v.imag, 25),
          mp.nstr(d.real, 25), mp.nstr(d.imag, 25))
for n in range(1, 31):
    print("zero", n, mp.nstr(mp.zetazero(n).imag, 22))
# Fourier transform of the unit bump at a few real points
for z in [1, 3, 14.134725141734693, 50]:
    re = mp.quad(lambda x: bump(x) * mp.cos(z * x), mp.linspace(-1, 1, 41))
    print("bump_hat", z, mp.nstr(re, 22))
