"""Thickness of a few Cantor sets, and what it buys for progressions.

Run:  python3 demos/thickness_and_patterns.py
"""

from fractions import Fraction

from thickpat import SetDescriptor, ap_capacity, ap_search, gap_lemma_check, hausdorff_lower, longest_ap, thickness

for eps in (Fraction(1, 3), Fraction(1, 5), Fraction(1, 9)):
    d = SetDescriptor.middle(eps)
    t = thickness(d, 4)
    print(f"middle-{eps} set: {t.describe()}, dim_H >= {hausdorff_lower(t.value).mid:.4f}")

# The capacity formula only starts paying off at enormous thickness.
for tau in (10**6, 10**9, 10**12):
    print(f"tau = {tau:.0e}: guaranteed pattern size N = {ap_capacity(tau).N}")

C = SetDescriptor.middle(Fraction(1, 3))
print("(0, 1/3, 2/3, 1):", ap_search(C, 4, Fraction(1, 3), 3).verdict)
print("3 terms, gap 1/2:", ap_search(C, 3, Fraction(1, 2), 1).verdict)

for eps in (Fraction(1, 3), Fraction(1, 5)):
    r = longest_ap(SetDescriptor.middle(eps), 5)
    print(f"longest progression in the depth-5 cover of the middle-{eps} set: {r.length}")

a = SetDescriptor.middle(Fraction(1, 5))
b = SetDescriptor.middle(Fraction(1, 5), (Fraction(2, 5), Fraction(7, 5)))
r = gap_lemma_check(a, b, 10)
print(f"two thick sets, offset 2/5: {r.verdict}, common point {r.certificate.witness}")
