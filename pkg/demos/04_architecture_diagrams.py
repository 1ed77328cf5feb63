"""
Diagrams that cannot lie
========================

The renderer walks the same values that execute: the topology inside each
box and the wiring between boxes come straight from the machine tree, so
the picture is always in sync with the behavior. Output is byte-stable.
"""

from crem import render_base, render_flow
from crem.cart import cart, whole_cart_domain

# %%
# A single machine renders as a state diagram. The point-shaped node marks
# the initial state; identity self-loops are implied and not drawn.

print(render_base(cart().machine, "dot").text)

# %%
# The composed domain renders as clusters (one per machine) with the
# composition structure as labeled edges: the cart/gateway feedback pair
# and the kleisli edge into the projection.

print(render_flow(whole_cart_domain(), "dot").text)

# %%
# The same two diagrams in Mermaid, for pasting into a markdown file.

print(render_base(cart().machine, "mermaid").text)
print(render_flow(whole_cart_domain(), "mermaid").text)
