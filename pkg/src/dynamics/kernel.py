"""
Compiled event loop for the thinned continuous-time chain.

All particles share the dominating rate 4 N^2 (1 + lambda/N) + 1. An event
picks a uniform particle, then either proposes an exchange in a uniform
direction, accepted with probability (1 + delta lambda_i / N) / (1 + lambda/N)
and cancelled on an occupied target, or redraws the angle from the
alignment law. The realized chain has generator N^2 L + N L^WA + L^G exactly.
"""

import math

from numba import njit

STATUS_DONE = 0
STATUS_BUDGET = 1

# counter slots
EXCHANGE_ATTEMPTS = 0
ACCEPTED = 1
REJECTED_EXCLUSION = 2
REJECTED_DRIFT = 3
ANGLE_UPDATES = 4
N_COUNTERS = 5


@njit(cache=True)
def _uniform_open(rng):
    # (0, 1]
    return 1.0 - rng.random()


@njit(cache=True)
def von_mises_draw(rng, mu, kappa):
    """Best-Fisher rejection sampler; returns an angle in [0, 2pi)."""
    two_pi = 2.0 * math.pi
    if kappa < 1e-8:
        return two_pi * rng.random()
    if kappa < 1e-5:
        r = 1.0 / kappa + kappa
    else:
        tau = 1.0 + math.sqrt(1.0 + 4.0 * kappa * kappa)
        rho = (tau - math.sqrt(2.0 * tau)) / (2.0 * kappa)
        r = (1.0 + rho * rho) / (2.0 * rho)
    while True:
        z = math.cos(math.pi * rng.random())
        f = (1.0 + r * z) / (r + z)
        c = kappa * (r - f)
        u2 = _uniform_open(rng)
        if c * (2.0 - c) - u2 > 0.0 or math.log(c / u2) + 1.0 - c >= 0.0:
            break
    f = min(1.0, max(-1.0, f))
    if rng.random() > 0.5:
        theta = mu + math.acos(f)
    else:
        theta = mu - math.acos(f)
    theta = theta % two_pi
    if theta >= two_pi:
        theta = 0.0
    return theta


@njit(cache=True)
def _drift_component(theta, axis, two_type):
    if two_type:
        if axis == 1:
            return 0.0
        return 1.0 if theta == 0.0 else -1.0
    if axis == 0:
        return math.cos(theta)
    return math.sin(theta)


@njit(cache=True, nogil=True)
def run_events(
    occupancy,
    angle,
    particles,
    slot,
    neighbors,
    side,
    drift,
    beta,
    two_type,
    t,
    t_end,
    max_events,
    counters,
    tag,
    rng,
):
    """
    Advance in place until t_end or until max_events events were processed.

    Returns (time, status). `tag` is [site, dx1, dx2] of the tracked particle
    (site -1 when nothing is tracked); its displacement is unwrapped.
    """
    k = particles.size
    if k == 0:
        return t_end, STATUS_DONE

    scale = float(side) * float(side)
    exchange = 4.0 * scale * (1.0 + drift / side)
    per_particle = exchange + 1.0
    total = k * per_particle
    p_exchange = exchange / per_particle
    top = 1.0 + drift / side

    events = 0
    while True:
        if events >= max_events:
            return t, STATUS_BUDGET
        dt = -math.log(_uniform_open(rng)) / total
        if t + dt > t_end:
            return t_end, STATUS_DONE
        t += dt
        events += 1

        p = int(rng.random() * k)
        if p >= k:
            p = k - 1
        x = particles[p]

        if rng.random() < p_exchange:
            counters[EXCHANGE_ATTEMPTS] += 1
            d = int(rng.random() * 4.0)
            if d > 3:
                d = 3
            axis = d // 2
            delta = 1 if d % 2 == 0 else -1
            theta = angle[x]
            accept = (1.0 + delta * drift * _drift_component(theta, axis, two_type) / side) / top
            if rng.random() >= accept:
                counters[REJECTED_DRIFT] += 1
                continue
            y = neighbors[x, d]
            if occupancy[y] == 1:
                counters[REJECTED_EXCLUSION] += 1
                continue
            occupancy[y] = 1
            occupancy[x] = 0
            angle[y] = theta
            angle[x] = 0.0
            slot[y] = p
            slot[x] = -1
            particles[p] = y
            counters[ACCEPTED] += 1
            if tag[0] == x:
                tag[0] = y
                tag[1 + axis] += delta
        else:
            counters[ANGLE_UPDATES] += 1
            sx = 0.0
            sy = 0.0
            for j in range(4):
                y = neighbors[x, j]
                if occupancy[y] == 1:
                    sx += math.cos(angle[y])
                    sy += math.sin(angle[y])
            if two_type:
                p_plus = 1.0 / (1.0 + math.exp(-2.0 * beta * sx))
                angle[x] = 0.0 if rng.random() < p_plus else math.pi
            else:
                angle[x] = von_mises_draw(rng, math.atan2(sy, sx), beta * math.sqrt(sx * sx + sy * sy))
