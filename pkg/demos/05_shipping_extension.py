"""
Growing the domain without touching it
======================================

Adding shipping does not modify the cart: the two write models run as
alternatives, a new policy bridges them (payment completed -> start
shipping), and the read model pairs both projections. The result is again
a single machine from tagged commands to tagged views.
"""

from crem import Left, Right, render_flow
from crem.cart import CartCommand, ShippingCommand, cart_and_shipping

domain = cart_and_shipping()

# %%
# Paying the cart now also starts the shipment: the last view in the first
# batch comes from the shipping projection, driven by the policy-injected
# StartShipping command.


def show(value):
    global domain
    views, domain = domain.step(value)
    tags = [
        f"cart:{v.value.name}" if isinstance(v, Left) else f"ship:{v.value.name}"
        for v in views
    ]
    side = "cart" if isinstance(value, Left) else "ship"
    print(f"{side} {value.value.name:>15} -> {tags}")


show(Left(CartCommand.PayCart))
show(Right(ShippingCommand.MarkAsDelivered))
show(Left(CartCommand.PayCart))

# %%
# The architecture diagram now shows all the pieces: both aggregates under
# an "alternative" bracket, the policy loop, and the paired projections.

print()
print(render_flow(cart_and_shipping(), "dot").text)
