"""
Exponential decay of excluded-color beliefs
===========================================

While only Blacks come out, the belief in any box containing White
decays like ((m-i)/m)^n, and the forecast of a White decays like
(1/m)((m-1)/m)^n.  This script tabulates the exact posterior against
those closed forms and shows the ratio marching to 1.
"""

from sixbox import BoxModel, approximation_report

model = BoxModel()
rows = approximation_report(model, max_n=100)

print("n     exact P(B1|n Blacks)  approx (4/5)^n   ratio         P(W next)")
for n in (0, 1, 2, 5, 10, 20, 50, 100):
    r = rows[n]
    print(
        f"{n:<4d}  {r.exact_posterior[1]:<20.9e}  {r.approx_posterior[1]:<15.9e}"
        f"  {r.posterior_ratio[1]:.9f}  {r.exact_predictive:.3e}"
    )

r = rows[100]
print(
    f"\nafter 100 straight Blacks the chance of a White is {r.exact_predictive:.3e}"
    " -- about 1 in 25 billion, yet not zero: only the all-White box is"
    " logically ruled out."
)
print(f"closed form at n=100 is off by {abs(r.predictive_ratio - 1):.2e} relative")
