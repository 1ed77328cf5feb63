"""Reference shopping-cart domain: aggregates, policies and projections.

The write side validates commands and emits events, policies react to
events with new commands, and projections fold events into the views a
user would query. Everything is a machine, so the whole domain is one
composed machine from commands to views.
"""

from __future__ import annotations

from enum import Enum

from .compose import (
    Basic,
    Feedback,
    Kleisli,
    Left,
    Right,
    StateMachine,
    fanin,
    rmap,
    split_choice,
)
from .machine import BaseMachine, MachineState, StepResult, stateless
from .topology import Topology


class CartCommand(Enum):
    PayCart = "PayCart"
    MarkCartAsPaid = "MarkCartAsPaid"


class CartEvent(Enum):
    CartPaymentInitiated = "CartPaymentInitiated"
    CartPaymentCompleted = "CartPaymentCompleted"


class CartView(Enum):
    PaymentPending = "PaymentPending"
    PaymentInProgress = "PaymentInProgress"
    PaymentDone = "PaymentDone"


class ShippingCommand(Enum):
    StartShipping = "StartShipping"
    MarkAsDelivered = "MarkAsDelivered"


class ShippingEvent(Enum):
    ShippingStarted = "ShippingStarted"
    ShippingDelivered = "ShippingDelivered"


class ShippingInfo(Enum):
    NotShipped = "NotShipped"
    InTransit = "InTransit"
    Delivered = "Delivered"


WAITING_FOR_PAYMENT = "WaitingForPaymentVertex"
INITIATING_PAYMENT = "InitiatingPaymentVertex"
PAYMENT_COMPLETE = "PaymentCompleteVertex"

CART_TOPOLOGY = Topology(
    (
        (WAITING_FOR_PAYMENT, (INITIATING_PAYMENT,)),
        (INITIATING_PAYMENT, (PAYMENT_COMPLETE,)),
        (PAYMENT_COMPLETE, ()),
    )
)

_CART_TABLE: dict[tuple[str, CartCommand], tuple[tuple[CartEvent, ...], str]] = {
    (WAITING_FOR_PAYMENT, CartCommand.PayCart): (
        (CartEvent.CartPaymentInitiated,),
        INITIATING_PAYMENT,
    ),
    (WAITING_FOR_PAYMENT, CartCommand.MarkCartAsPaid): ((), WAITING_FOR_PAYMENT),
    (INITIATING_PAYMENT, CartCommand.PayCart): ((), INITIATING_PAYMENT),
    (INITIATING_PAYMENT, CartCommand.MarkCartAsPaid): (
        (CartEvent.CartPaymentCompleted,),
        PAYMENT_COMPLETE,
    ),
    (PAYMENT_COMPLETE, CartCommand.PayCart): ((), PAYMENT_COMPLETE),
    (PAYMENT_COMPLETE, CartCommand.MarkCartAsPaid): ((), PAYMENT_COMPLETE),
}


def _cart_action(state: MachineState, command: CartCommand) -> StepResult:
    events, vertex = _CART_TABLE[(state.vertex, command)]
    return StepResult(list(events), MachineState(vertex))


def cart() -> StateMachine:
    """The cart aggregate: validates payment commands, emits cart events."""
    return Basic(
        BaseMachine("cart", CART_TOPOLOGY, MachineState(WAITING_FOR_PAYMENT), _cart_action)
    )


def payment_gateway(always_fail: bool = False) -> StateMachine:
    """Simulated gateway policy: confirms initiated payments.

    ``always_fail`` models an outage where the gateway never confirms.
    """

    def react(event: CartEvent) -> list[CartCommand]:
        if event is CartEvent.CartPaymentInitiated and not always_fail:
            return [CartCommand.MarkCartAsPaid]
        return []

    return Basic(stateless("paymentGateway", react))


PAYMENT_PENDING = "Pending"
PAYMENT_IN_PROGRESS = "InProgress"
PAYMENT_DONE = "Done"

PAYMENT_STATUS_TOPOLOGY = Topology(
    (
        (PAYMENT_PENDING, (PAYMENT_IN_PROGRESS,)),
        (PAYMENT_IN_PROGRESS, (PAYMENT_DONE,)),
        (PAYMENT_DONE, ()),
    )
)


def _payment_status_action(state: MachineState, event: CartEvent) -> StepResult:
    if state.vertex == PAYMENT_PENDING and event is CartEvent.CartPaymentInitiated:
        return StepResult([CartView.PaymentInProgress], MachineState(PAYMENT_IN_PROGRESS))
    if state.vertex == PAYMENT_IN_PROGRESS and event is CartEvent.CartPaymentCompleted:
        return StepResult([CartView.PaymentDone], MachineState(PAYMENT_DONE))
    return StepResult([], state)  # out-of-order events are ignored


def payment_status() -> StateMachine:
    """Projection folding cart events into the payment progress view."""
    return Basic(
        BaseMachine(
            "paymentStatus",
            PAYMENT_STATUS_TOPOLOGY,
            MachineState(PAYMENT_PENDING),
            _payment_status_action,
        )
    )


def whole_cart_domain() -> StateMachine:
    """Commands in, views out: the full cart payment loop."""
    return Kleisli(Feedback(cart(), payment_gateway()), payment_status())


NOT_SHIPPED = "NotShippedV"
SHIPPING = "ShippingV"
DELIVERED = "DeliveredV"

SHIPPING_TOPOLOGY = Topology(
    (
        (NOT_SHIPPED, (SHIPPING,)),
        (SHIPPING, (DELIVERED,)),
        (DELIVERED, ()),
    )
)


def _shipping_action(state: MachineState, command: ShippingCommand) -> StepResult:
    if state.vertex == NOT_SHIPPED and command is ShippingCommand.StartShipping:
        return StepResult([ShippingEvent.ShippingStarted], MachineState(SHIPPING))
    if state.vertex == SHIPPING and command is ShippingCommand.MarkAsDelivered:
        return StepResult([ShippingEvent.ShippingDelivered], MachineState(DELIVERED))
    return StepResult([], state)


def shipping() -> StateMachine:
    """The shipping aggregate: start and deliver a shipment."""
    return Basic(
        BaseMachine("shipping", SHIPPING_TOPOLOGY, MachineState(NOT_SHIPPED), _shipping_action)
    )


def payment_complete_policy() -> StateMachine:
    """Policy that starts shipping whenever a payment completes."""

    def react(event: CartEvent) -> list[ShippingCommand]:
        if event is CartEvent.CartPaymentCompleted:
            return [ShippingCommand.StartShipping]
        return []

    return Basic(stateless("paymentCompletePolicy", react))


NOT_SHIPPED_INFO = "NotShippedI"
IN_TRANSIT_INFO = "InTransitI"
DELIVERED_INFO = "DeliveredI"

SHIPPING_INFO_TOPOLOGY = Topology(
    (
        (NOT_SHIPPED_INFO, (IN_TRANSIT_INFO,)),
        (IN_TRANSIT_INFO, (DELIVERED_INFO,)),
        (DELIVERED_INFO, ()),
    )
)


def _shipping_info_action(state: MachineState, event: ShippingEvent) -> StepResult:
    if state.vertex == NOT_SHIPPED_INFO and event is ShippingEvent.ShippingStarted:
        return StepResult([ShippingInfo.InTransit], MachineState(IN_TRANSIT_INFO))
    if state.vertex == IN_TRANSIT_INFO and event is ShippingEvent.ShippingDelivered:
        return StepResult([ShippingInfo.Delivered], MachineState(DELIVERED_INFO))
    return StepResult([], state)


def shipping_info() -> StateMachine:
    """Projection folding shipping events into the delivery status view."""
    return Basic(
        BaseMachine(
            "shippingInfo",
            SHIPPING_INFO_TOPOLOGY,
            MachineState(NOT_SHIPPED_INFO),
            _shipping_info_action,
        )
    )


def _tag_sides(branch):
    """Push the branch tag inside the branch's list of messages."""
    if isinstance(branch, Left):
        return [Left(item) for item in branch.value]
    if isinstance(branch, Right):
        return [Right(item) for item in branch.value]
    raise TypeError(f"expected Left or Right, got {branch!r}")


def _wrap_right(items):
    return [Right(item) for item in items]


def cart_and_shipping() -> StateMachine:
    """Cart and shipping write models plus both projections, wired together.

    The payment-complete policy closes the loop between the two aggregates:
    completing a payment injects a StartShipping command.
    """
    write_model = Feedback(cart(), payment_gateway())
    write_with_shipping = rmap(
        split_choice(write_model, shipping()), _tag_sides, name="mergeWriteEvents"
    )
    start_on_payment = rmap(
        payment_complete_policy(), _wrap_right, name="routeShippingCommands"
    )
    policy_side = fanin(
        start_on_payment,
        Basic(stateless("ignoreShippingEvents", lambda _event: [])),
        name="mergePolicyOutput",
    )
    write_model_full = Feedback(write_with_shipping, policy_side)
    read_model = rmap(
        split_choice(payment_status(), shipping_info()), _tag_sides, name="mergeViews"
    )
    return Kleisli(write_model_full, read_model)
