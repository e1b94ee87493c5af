"""
Closed forms of the half-integer order functions, used as independent references.

    I_{1/2}(u)  = sqrt(2/(pi u)) sinh u        I_{-1/2}(u) = sqrt(2/(pi u)) cosh u
    K_{1/2}(u)  = sqrt(pi/(2u)) e^{-u}         K_{3/2}(u)  = sqrt(pi/(2u)) e^{-u} (1 + 1/u)
"""
import math


def i_half(u):
    return math.sqrt(2.0 / (math.pi * u)) * math.sinh(u)


def i_minus_half(u):
    return math.sqrt(2.0 / (math.pi * u)) * math.cosh(u)


def scaled_i_half(u):
    # e^{-u} I_{1/2}(u), finite for any u
    return -math.expm1(-2.0 * u) / math.sqrt(2.0 * math.pi * u)


def k_half(u):
    return math.sqrt(math.pi / (2.0 * u)) * math.exp(-u)


def k_three_halves(u):
    return k_half(u) * (1.0 + 1.0 / u)


def di_half(u):
    return math.sqrt(2.0 / math.pi) * (math.cosh(u) / math.sqrt(u) - math.sinh(u) / (2.0 * u ** 1.5))


def dk_half(u):
    return -math.sqrt(math.pi / 2.0) * math.exp(-u) * (1.0 / math.sqrt(u) + 0.5 / u ** 1.5)


def p_half(u):
    # I_{1/2} K_{1/2} = (1 - e^{-2u}) / (2u)
    return -math.expm1(-2.0 * u) / (2.0 * u)


def d2p_half(u):
    g = -math.expm1(-2.0 * u)
    dg = 2.0 * math.exp(-2.0 * u)
    d2g = -4.0 * math.exp(-2.0 * u)
    return d2g / (2.0 * u) - dg / u ** 2 + g / u ** 3


def rel(a, b):
    return abs(a - b) / abs(b)
