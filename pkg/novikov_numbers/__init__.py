"""Novikov numbers of twisted cochain complexes and the checks built around them."""

from .algebra import Exact, IntPolynomial, LaurentMatrix, LaurentPoly, Randomized, rank_at_point, rank_generic
from .morse_bott import CriticalComponent, MorseData, check_main_theorem, morse_polynomial, novikov_polynomial
from .twisted import TwistedComplex, build_complex, dimensions_at, euler_characteristic, jump_scan, novikov_numbers
