"""How fast the Gowers norms of the truncated Thue-Morse sign decay.

Run:  python notebooks/02_gowers_decay.py

The U^2 values come from the FFT route and are cross-checked against the
derivative recursion; U^3 is only cheap for small rho.  The last block
compares the discrete norm with a Monte-Carlo estimate of the integral
version over the torus.
"""
from psthue.gowers import (
    decay_fit, gowers_recursion, gowers_u2_fourier, integral_gowers_mc,
)

print("rho   ||.||_U2^4         ||.||_U3^8")
for rho in range(0, 13):
    u2 = gowers_u2_fourier(rho)
    assert u2.power_value == gowers_recursion(2, rho).power_value
    u3 = f"{float(gowers_recursion(3, rho).power_value):.6f}" if rho <= 8 else "-"
    print(f"{rho:3d}   {float(u2.power_value):.3e}   {u3}")

for m in (2, 3):
    fit = decay_fit(m, 2, 14 if m == 2 else 8)
    print(f"\nU^{m}: fitted decay rate eta_hat = {fit.eta_hat:.3f} bits per digit")

print("\nintegral vs discrete (10^5 samples)")
for m in (2, 3):
    for rho in (2, 4, 6):
        mc = integral_gowers_mc(m, rho, 10**5, seed=rho)
        disc = gowers_recursion(m, rho).value
        print(f"  m={m} rho={rho}: integral {mc.estimate:.4f} ± {mc.stderr:.4f}, discrete {disc:.4f}")
