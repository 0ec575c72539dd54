"""Distances, the Cayley transform and reduction of a point in genus 2."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from siegellab import geometry as G
from siegellab.exactmat import SiegelPoint, mat, random_symplectic
from siegellab.reduction import siegel_reduce, siegel_volume


def main() -> None:
    p = np.array([[1.0j, 0.2], [0.2, 2.0j]])
    q = np.array([[0.3 + 1.5j, 0], [0, 0.5j]])
    m = np.array(random_symplectic(2, random.Random(7)), dtype=float)
    print("distance        ", G.geodesic_distance(p, q))
    print("after symplectic", G.geodesic_distance(G.act(m, p), G.act(m, q)))
    w = G.cayley_inv(p)
    print("Cayley round trip error", np.max(np.abs(G.cayley(w) - p)))
    z = SiegelPoint(mat([[Fraction(7, 3), Fraction(1, 2)], [Fraction(1, 2), Fraction(-4, 5)]]),
                    mat([[Fraction(1, 5), Fraction(1, 10)], [Fraction(1, 10), Fraction(1, 3)]]))
    res = siegel_reduce(z)
    print("reduced X", [[str(x) for x in r] for r in res.reduced.X])
    print("reduced Y", [[str(y) for y in r] for r in res.reduced.Y])
    print("det Im history", [str(d) for d in res.det_history])
    v = siegel_volume(2)
    print(f"vol(F_2) = {v.rational} pi^{v.pi_power} = {v.float_value}")


if __name__ == "__main__":
    main()
