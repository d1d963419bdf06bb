"""
Posterior vs likelihood anatomy
===============================

A box holds five balls, zero to five of them White; we never look
inside.  After each draw (with replacement) we update the probability of
every composition.  This script replays the classic teaching moment: a
run that opens with sixteen Blacks, then a White, then goes on to 18
White in 100 draws, and shows why the absurdly small probability of the
exact observed sequence is irrelevant -- only likelihood *ratios*
matter.
"""

from sixbox import (
    BoxModel,
    SequenceSummary,
    anatomy,
    bayes_factor,
    odds_table,
    posterior_from_summary,
    predictive_white,
    uniform_prior,
)

model = BoxModel()  # six boxes, propensities 0, 0.2, ..., 1
prior = uniform_prior(model)

for n, x, story in [
    (16, 0, "sixteen Blacks in a row"),
    (17, 1, "then a first White appears"),
    (100, 18, "after 100 draws, 18 of them White"),
]:
    summary = SequenceSummary(n, x)
    table = anatomy(summary, model)
    post = posterior_from_summary(prior, summary)
    print(f"\n--- {story} (n={n}, x={x}) ---")
    print("box  posterior     P(summary|box)  P(sequence|box)")
    for i in range(6):
        print(
            f"B{i}   {table.posterior[i]:<12.6e}  {table.binomial_likelihood[i]:<14.6e}"
            f"  {table.sequence_likelihood[i]:.6e}"
        )
    print(f"P(next draw is White) = {predictive_white(post):.6f}")

# The sequence actually observed had ~3e-21 probability under the best
# hypothesis.  Meaningless alone; decisive in ratio:
summary = SequenceSummary(100, 18)
print("\nBetting odds after (n=100, x=18):")
for j in (2, 3, 4):
    print(f"  box 1 vs box {j}: {bayes_factor(model, 1, j, summary):.2e}")

print("\nFull odds matrix (rows vs columns):")
print(odds_table(summary, model).odds)
