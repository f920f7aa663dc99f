"""Twisted superpotentials of Ore extensions.

A certified base algebra is a derivation quotient algebra of its top
Koszul tensor omega.  The Ore extension inherits a degree-(d+1)
twisted superpotential omega-hat built from the cyclic terms of
z (x) omega and the sequence-pair towers; contracting omega-hat by
order-d functionals recovers the extension's relation space exactly,
and the twist condition pins down mu_B independently of the main
formula.
"""

import random

from orenaka import (
    Matrix,
    QuadraticAlgebra,
    check_automorphism,
    derivation_quotient_relations,
    make_quantum_plane,
    nakayama_of_A,
    nakayama_of_B,
    random_admissible_derivation,
    twist_solve,
)


def main():
    a = make_quantum_plane(2)
    sig = check_automorphism(Matrix([[3, 0], [0, 5]]), a)
    rng = random.Random(12)
    delta = random_admissible_derivation(a, sig, rng)
    rep = nakayama_of_B(sig, delta)
    d = a.certificate.d

    print("q = 2 plane, sigma = diag(3, 5), random admissible delta")
    print(f"  omega      = {a.omega!r}")
    print(f"  omega-hat  has {len(rep.omega_hat.entries)} terms in degree {d + 1}")
    print(f"  mu_B = {rep.mu_B!r}")
    print()

    recovered = derivation_quotient_relations(rep.omega_hat, d - 1)
    print(f"order-{d - 1} derivations of omega-hat recover R-hat: "
          f"{recovered == rep.relations_hat}")
    print(f"order-{d - 2} derivations of omega recover R: "
          f"{derivation_quotient_relations(a.omega, d - 2) == a.R}")

    nu = twist_solve(rep.omega_hat)
    print(f"twist condition solved on omega-hat returns mu_B: {nu == rep.mu_B}")
    print()

    print("feeding B back in as a quadratic algebra on (x1, x2, z):")
    b = QuadraticAlgebra(["x1", "x2", "z"], rep.relations_hat)
    b.certify_as_regular()
    print(f"  B certifies AS-regular of dimension {b.certificate.d}")
    print(f"  nakayama_of_A(B) equals mu_B: {nakayama_of_A(b).matrix == rep.mu_B}")


if __name__ == "__main__":
    main()
