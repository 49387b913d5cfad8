"""Write a Maurer-Cartan 2-form and a perturbed copy as torusfield files and check both.

    python demos/mc_field_input.py [workdir]

Uses demos/configs/mc_custom.cfg, which spells the 3-torus model out
explicitly instead of naming a built-in.
"""

import os
import sys
import tempfile

import numpy as np

from presym.cli import main
from presym.families import model_T3, random_horizontal_beta, random_mc_beta
from presym.fieldio import write_field

CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), "configs", "mc_custom.cfg")


def run():
    work = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="presym-demo-")
    model = model_T3(16)
    rng = np.random.default_rng(11)
    beta = random_mc_beta(model, rng, amplitude=0.1, kmax=1)
    bump = random_horizontal_beta(model, rng, amplitude=1e-3, kmax=2)
    for name, field in (("beta", beta), ("beta_perturbed", beta + bump)):
        path = os.path.join(work, name + ".csv")
        write_field(path, field.values, model.grid, 2)
        print(f"--- {name}")
        code = main(["mc", "--model", CONFIG, "--input", path])
        print(f"exit code {code}")


if __name__ == "__main__":
    run()
