"""Print enumerated vs closed-form root counts for the two lattice families.

Columns: k, roots of E8 + exterior((1)^k), roots of exterior((1)^(k+8)).
The two counts collide exactly once, at k = 4.
"""

import sys

sys.path.insert(0, "src")

from latcert.exterior import exterior_nd_form
from latcert.forms import direct_sum, e8_form, unit_form
from latcert.roots import closed_form_counts, count_vectors_of_norm


def main():
    print(f"{'k':>3} {'e8+ext':>8} {'ext(k+8)':>9}")
    for k in range(1, 7):
        left = count_vectors_of_norm(
            direct_sum(e8_form(), exterior_nd_form(unit_form(k)).induced), 2)
        right = count_vectors_of_norm(
            exterior_nd_form(unit_form(k + 8)).induced, 2)
        assert (left, right) == closed_form_counts(k)
        tag = "  <- collision" if left == right else ""
        print(f"{k:>3} {left:>8} {right:>9}{tag}")


if __name__ == "__main__":
    main()
