"""
A single machine with a guarded state space
===========================================

The cart aggregate is one Mealy machine: it holds a current state, and an
action that maps (state, command) to (events, next state). Its topology
lists which state transitions exist at all, and every step is checked
against it.
"""

from dataclasses import replace

from crem import DisallowedTransition, MachineState, StepResult, BaseMachine
from crem.cart import CART_TOPOLOGY, PAYMENT_COMPLETE, WAITING_FOR_PAYMENT, CartCommand, cart

# %%
# The topology says: waiting -> initiating -> complete, and nothing else.

print("allowed transitions:")
for source, target in CART_TOPOLOGY.transitions():
    print(f"  {source} -> {target}")

# %%
# Step the machine through a payment. Stepping never mutates: it returns
# the outputs and a new machine value.

machine = cart().machine
for command in [CartCommand.PayCart, CartCommand.MarkCartAsPaid, CartCommand.PayCart]:
    events, machine = machine.step(command)
    print(f"{command.name:>14} -> {[e.name for e in events]}  (now {machine.state.vertex})")

# %%
# A buggy action cannot sneak through the topology. This one tries to jump
# from PaymentComplete straight back to WaitingForPayment, an edge that
# does not exist, so the step fails loudly instead of corrupting state.


def buggy_action(state: MachineState, command) -> StepResult:
    return StepResult([], MachineState(WAITING_FOR_PAYMENT))


buggy = BaseMachine("buggyCart", CART_TOPOLOGY, MachineState(PAYMENT_COMPLETE), buggy_action)
try:
    buggy.step(CartCommand.PayCart)
except DisallowedTransition as error:
    print(f"rejected: {error}")
