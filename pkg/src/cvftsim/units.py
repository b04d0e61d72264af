"""Squeezing unit conversions (10 dB corresponds to exp(-2r) = 0.1)."""
import math

LN10 = math.log(10.0)


def db_to_r(squeezing_db: float) -> float:
    return squeezing_db * LN10 / 20.0


def r_to_db(r: float) -> float:
    return 20.0 * r / LN10


def variance_to_db(ratio: float) -> float:
    """``-10 log10(ratio)`` for a variance ratio relative to vacuum."""
    return -10.0 * math.log10(ratio)
