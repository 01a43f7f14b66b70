"""Survey the index-two unimodular neighbors of (1)^h for h = 8..13."""

import sys

sys.path.insert(0, "src")

from latcert.forms import unit_form
from latcert.neighbors import two_neighbors
from latcert.roots import count_vectors_of_norm


def main():
    for h in range(8, 14):
        ns = two_neighbors(unit_form(h))
        if not ns:
            print(f"h={h:2}  none")
            continue
        for n in ns:
            roots = count_vectors_of_norm(n.form, 2)
            print(f"h={h:2}  {n.parity:4}  roots={roots}")


if __name__ == "__main__":
    main()
