"""Numba event loops for the channel simulator.

The random inputs (transfer sizes and directions) are drawn by the caller
with the package Rng, so these kernels are pure functions of their arrays
and stay deterministic under any thread count.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def run_channel(sizes, alice_pays, w, reset_radius, phi, beta, a_records):
    """Drive one channel through a transfer sequence.

    State is Alice's balance, starting at w/2.  A transfer executes in the
    channel when the payer's balance covers it; otherwise it goes on chain
    when beta*z > phi, else it is skipped.  After an in-channel transfer the
    state resets to w/2 (cost: a_records records) whenever it is within
    reset_radius of either boundary.

    Returns (in_channel, on_chain, skipped, resets,
             lightning_volume, on_chain_volume, accepted_value_sum).
    """
    state = 0.5 * w
    in_channel = 0
    on_chain = 0
    skipped = 0
    resets = 0
    lightning_volume = 0.0
    on_chain_volume = 0.0
    accepted = 0.0
    for i in range(sizes.shape[0]):
        z = sizes[i]
        payer_balance = state if alice_pays[i] else w - state
        if payer_balance >= z:
            if alice_pays[i]:
                state -= z
            else:
                state += z
            in_channel += 1
            lightning_volume += z
            accepted += z
            if state <= reset_radius or state >= w - reset_radius:
                state = 0.5 * w
                resets += 1
        elif beta * z > phi:
            on_chain += 1
            on_chain_volume += z
            accepted += z
        else:
            skipped += 1
    return in_channel, on_chain, skipped, resets, lightning_volume, on_chain_volume, accepted


@njit(cache=True, nogil=True)
def utility_over_radii(sizes, alice_pays, w, radii, phi, beta, a_records, interest_cost):
    """Net utility and blockchain hits for every reset radius on one
    transfer sequence (common random numbers across the radius grid)."""
    n_r = radii.shape[0]
    utilities = np.empty(n_r)
    hits = np.empty(n_r)
    for j in range(n_r):
        in_ch, on_ch, skip, resets, lv, ov, accepted = run_channel(
            sizes, alice_pays, w, radii[j], phi, beta, a_records
        )
        blockchain_hits = on_ch + a_records * resets
        utilities[j] = beta * accepted - phi * blockchain_hits - interest_cost
        hits[j] = blockchain_hits
    return utilities, hits


@njit(cache=True, nogil=True)
def no_lightning_counters(sizes, phi, beta):
    """Blockchain-only world: transfers with beta*z > phi pay for a record,
    the rest are skipped.  Returns (count, volume, accepted_value_sum)."""
    count = 0
    volume = 0.0
    accepted = 0.0
    for i in range(sizes.shape[0]):
        z = sizes[i]
        if beta * z > phi:
            count += 1
            volume += z
            accepted += z
    return count, volume, accepted
