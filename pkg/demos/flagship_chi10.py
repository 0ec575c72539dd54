"""Hecke eigenvalues of chi10, its Satake data and the Saito-Kurokawa factorization."""

from __future__ import annotations

from siegellab.elliptic import e6_delta_qexp
from siegellab.hecke import eigenvalue, satake_solve
from siegellab.lfn import sk_factorization_check, spinor_factor, standard_factor
from siegellab.theta import chi10


def main() -> None:
    f = chi10(20)
    a_f = e6_delta_qexp(3)
    for p in (2, 3):
        ev = [eigenvalue(f, op, p) for op in ("T(p)", "T1(p2)", "T2(p2)")]
        sd = satake_solve(2, 10, p, *ev)
        print(f"p = {p}: T(p), T1(p^2), T2(p^2) = {[str(x) for x in ev]}")
        print(f"  spinor   {[str(c) for c in spinor_factor(sd).coeffs]}")
        print(f"  standard {[str(c) for c in standard_factor(sd).coeffs]}")
        print(f"  lift of E6*Delta with a_f({p}) = {a_f[p]}: {sk_factorization_check(sd, a_f[p], 10)}")


if __name__ == "__main__":
    main()
