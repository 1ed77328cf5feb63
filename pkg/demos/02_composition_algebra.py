"""
Six ways to compose machines
============================

Machines compose into trees. Each node kind has one job: Sequential pipes,
Parallel pairs, Alternative routes, Feedback loops, Kleisli flat-maps.
The tree is a value; running it returns outputs plus the advanced tree.
"""

from crem import (
    Alternative,
    Basic,
    Feedback,
    FeedbackOverflow,
    Kleisli,
    Left,
    Parallel,
    Right,
    RunConfig,
    Sequential,
    run_trace,
    stateless,
    unrestricted_mealy,
)

double = Basic(stateless("double", lambda x: 2 * x))
increment = Basic(stateless("increment", lambda x: x + 1))
tally = Basic(unrestricted_mealy("tally", 0, lambda s, _: (s + 1, s + 1)))

# %%
# Sequential: output of the first becomes input of the second.

print("sequential:", run_trace(Sequential(double, increment), [1, 2, 3]))

# %%
# Parallel: a pair goes in, a pair comes out.

print("parallel:", run_trace(Parallel(double, tally), [(10, "a"), (20, "b")]))

# %%
# Alternative: Left goes to the first machine, Right to the second; the
# machine that was not addressed keeps its state untouched.

either = Alternative(Basic(unrestricted_mealy("lefts", 0, lambda s, _: (s + 1, s + 1))),
                     Basic(unrestricted_mealy("rights", 0, lambda s, _: (s + 1, s + 1))))
print("alternative:", run_trace(either, [Left("x"), Left("y"), Right("z")]))

# %%
# Kleisli: both machines emit batches; each element of the first batch is
# fed to the second machine, threading its state across the whole batch.

burst = Basic(stateless("burst", lambda n: list(range(n))))
label = Basic(stateless("label", lambda n: [f"item-{n}"]))
print("kleisli:", run_trace(Kleisli(burst, label), [3]))

# %%
# Feedback: forward outputs are accumulated and also bounced through the
# backward machine, whose answers re-enter the forward machine (FIFO).
# Here the countdown loop drains to zero and stops by itself.

countdown = Feedback(
    Basic(stateless("emit", lambda n: [n])),
    Basic(stateless("decrement", lambda n: [n - 1] if n > 0 else [])),
)
print("feedback:", run_trace(countdown, [4]))

# %%
# A loop that never settles is cut off by the iteration budget.

ping_pong = Feedback(
    Basic(stateless("ping", lambda x: [x])),
    Basic(stateless("pong", lambda x: [x])),
)
try:
    ping_pong.step("serve", RunConfig(feedback_cap=10))
except FeedbackOverflow as error:
    print("guarded:", error)
