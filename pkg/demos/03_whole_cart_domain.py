"""
A whole domain as one machine
=============================

Aggregate, policy and projection are all machines, so the running system
is just their composition: the cart loops with the payment gateway (a
policy turns events back into commands), and the event stream feeds the
payment-status projection, which produces what the user sees.
"""

from crem import Feedback, Kleisli, run_trace
from crem.cart import CartCommand, cart, payment_gateway, payment_status, whole_cart_domain

# %%
# One PayCart triggers the full loop: initiate, confirm, complete. The
# user-facing output is the progression of views, not raw events.

domain = whole_cart_domain()
for command in [CartCommand.PayCart, CartCommand.PayCart, CartCommand.MarkCartAsPaid]:
    views, domain = domain.step(command)
    print(f"{command.name:>14} -> {[v.name for v in views]}")

# %%
# The same wiring with a failing gateway: the payment starts but is never
# confirmed, and the projection reports only the in-progress view.

stuck = Kleisli(Feedback(cart(), payment_gateway(always_fail=True)), payment_status())
print("outage:", run_trace(stuck, [CartCommand.PayCart, CartCommand.PayCart]))
