"""Rebuild chi10 from its first Fourier-Jacobi coefficient."""

from __future__ import annotations

from siegellab.jacobi import fourier_jacobi, is_maass_space, kohnen_plus, lift_requirement, maass_lift
from siegellab.theta import chi10


def main() -> None:
    bound = 12
    f = chi10(20)
    phi = fourier_jacobi(f, 1)
    print(f"phi_1: weight {phi.weight}, nmax {phi.nmax}; the lift to bound {bound} needs nmax {lift_requirement(bound)}")
    h = kohnen_plus(phi)
    print("plus-space form:", {n: str(v) for n, v in list(h.coeffs.items())[:6]})
    lifted = maass_lift(phi, bound)
    print("lift equals chi10 truncated:", lifted == f.truncate(bound))
    print("chi10 satisfies the Maass relations:", is_maass_space(f))


if __name__ == "__main__":
    main()
