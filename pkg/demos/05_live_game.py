"""
The hidden-box game, scripted
=============================

The live-game service keeps a secret box per session while the audience
only ever sees beliefs.  This script drives the session store directly
(the HTTP layer adds nothing numeric): a hidden box is drawn at random,
balls are extracted for real, a wrong entry is undone, and the reveal
compares the secret against the final posterior.

To play interactively instead:  sixbox serve --port 8000
"""

from sixbox import BoxModel, Color, generate
from sixbox.service import SessionStore

model = BoxModel()
store = SessionStore(model)

session = store.create("random-secret", seed=2718)
print(f"session {session.id}: the box is hidden...")

draws = generate(model, session.secret_box, n=40, seed=99)
for step, obs in enumerate(draws, start=1):
    view = store.observe(session.id, obs)
    if step in (1, 5, 10, 20, 40):
        favorite = max(range(6), key=lambda i: view["posterior"][i])
        print(
            f"after {step:2d} draws: favorite B{favorite}"
            f" (p={view['posterior'][favorite]:.4f}),"
            f" P(White next)={view['predictiveWhite']:.4f}"
        )

# a mis-click gets corrected without restarting the session
store.observe(session.id, Color.WHITE)
view = store.undo(session.id)
print(f"undo leaves {view['historyLength']} draws on record")

final = store.reveal(session.id)
favorite = max(range(6), key=lambda i: final["posterior"][i])
print(f"revealed: the box was B{final['secretBox']}; the posterior favored B{favorite}")
print(f"odds of each box against the favorite: "
      + ", ".join(f"B{i}:{o:.2e}" for i, o in enumerate(final["oddsVsMostProbable"])))
