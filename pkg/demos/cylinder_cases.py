"""Kernel of Theta = eta_t + dt ^ A_t on the cylinder, node by node.

    python demos/cylinder_cases.py

For eta_t = t d theta_1 ^ d theta_2 and A = d theta_1 the form eta_0 vanishes,
A_0 is not in its image and the kernel has dimension 1; for t > 0 eta_t is
symplectic, A_t is in its image and the kernel is the line spanned by the
vector solving iota_v eta_t = -A_t together with d/dt.
"""

import numpy as np

from presym import cylinder as cy


def run():
    theta = cy.mixed_example(N=8, nodes=5)
    case, ker_eta, dim = cy.classify(theta.etas, theta.As)
    for i, t in enumerate(theta.times):
        frame, d, c = cy.ker_theta(theta, (0, 0), i)
        print(f"t={t:.2f}  case {c}  dim ker eta {int(ker_eta[i].flat[0])}  dim ker Theta {d}  "
              f"kernel {np.round(frame.T, 3).tolist()}")
    print(cy.lemma_two_of_three(theta))
    for name in ("moser-ready", "perturbed"):
        th = cy.moser_ready_example(8, 9, A_scale=1.0 if name == "moser-ready" else 1.1)
        rep = cy.cor_presym_cylinder(th)
        print(f"{name}: d Theta {rep['d_theta']:.2e}, variation {rep['variation']:.2e}, "
              f"sides {rep['lhs']}/{rep['rhs']}")


if __name__ == "__main__":
    run()
