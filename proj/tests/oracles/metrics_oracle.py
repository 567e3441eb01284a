#!/usr/bin/env python3
"""Freeze TF-IDF / ARI / pairwise-F1 expected values for the C++ tests.

ARI comes from sklearn (independent of the C++ code); TF-IDF weights are
recomputed from the definition with mpmath-free float math.
"""
import math

from sklearn.metrics import adjusted_rand_score

# --- tf-idf worked example: doc [a,a,b], model N=2, df(a)=2, df(b)=1 -------
idf_a = math.log((1 + 2) / (1 + 2)) + 1.0
idf_b = math.log((1 + 2) / (1 + 1)) + 1.0
wa, wb = 2 * idf_a, 1 * idf_b
norm = math.hypot(wa, wb)
print(f"idf_a={idf_a!r} idf_b={idf_b!r}")
print(f"unnormalized a={wa!r} b={wb!r}")
print(f"normalized   a={wa / norm!r} b={wb / norm!r}")

# --- ARI fixtures ----------------------------------------------------------
print("ari identical :", adjusted_rand_score([0, 0, 1, 1], [1, 1, 0, 0]))
print("ari 1-vs-singl:", adjusted_rand_score([0] * 10, list(range(10))))
a = [0, 0, 0, 1, 1, 1, 2, 2, 2, 2]
b = [0, 0, 1, 1, 1, 2, 2, 2, 0, 2]
print("ari mixed     :", repr(adjusted_rand_score(a, b)))

# --- pairwise F1: truth {AB|C}, predicted {ABC} ----------------------------
# predicted pairs {AB,AC,BC}; truth pairs {AB}; tp=1 p=1/3 r=1 f1=0.5
print("pairwise f1   :", 2 * (1 / 3 * 1) / (1 / 3 + 1))
