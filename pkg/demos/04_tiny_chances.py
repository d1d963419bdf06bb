"""
Everything we observe had a tiny chance to occur
================================================

Round a standard Gaussian draw to twelve decimal places and the
particular number you get had a probability of order 1e-13 -- yet some
such number appears every single time.  Small probability of an outcome
says nothing by itself about the credibility of its cause.
"""

import numpy as np

from sixbox import gaussian_tiny_chance

rng = np.random.Generator(np.random.PCG64(7))
decimals = 12

print("draw rounded to 12 decimals      probability of that exact value")
for _ in range(5):
    value = round(float(rng.standard_normal()), decimals)
    print(f"{value:>18.12f}              {gaussian_tiny_chance(value, decimals):.3e}")

print(
    "\nthe most probable 12-decimal value, 0.000000000000, still only has"
    f" a {gaussian_tiny_chance(0.0, decimals):.3e} chance"
)
