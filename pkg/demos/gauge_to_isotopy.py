"""Write a gauge path to disk, verify it, then integrate the isotopy it generates.

    python demos/gauge_to_isotopy.py [workdir]

The forward path passes both the gauge check and the pullback certificate;
the control path (alpha scaled by 1.1) fails the gauge check.
"""

import os
import sys
import tempfile

import numpy as np

from presym.cli import main
from presym.families import model_T3, raw_gauge_family
from presym.fieldio import write_gauge_path


def dump(folder, model, alpha_scale):
    beta, alpha = raw_gauge_family(model, eps=0.1, variant="moving", alpha_scale=alpha_scale)
    times = np.linspace(0.0, 1.0, 33)
    write_gauge_path(
        folder,
        times,
        {"beta": [beta(t).values for t in times], "alpha": [alpha(t).values for t in times]},
        model.grid,
        {"beta": 2, "alpha": 1},
    )


def run():
    work = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="presym-demo-")
    cfg = os.path.join(work, "t3.cfg")
    with open(cfg, "w") as fh:
        fh.write('model = "T3"\nN = 16\n')
    model = model_T3(16)
    for name, scale in (("forward", 1.0), ("control", 1.1)):
        path = os.path.join(work, name)
        dump(path, model, scale)
        print(f"--- {name} path: gauge check")
        code = main(["gauge", "--model", cfg, "--input", path, "--out", os.path.join(work, name + "_gauge")])
        print(f"exit code {code}")
        if code == 0:
            print(f"--- {name} path: isotopy from the gauge path")
            main(["moser", "--model", cfg, "--input", path, "--out", os.path.join(work, name + "_moser")])
    print(f"reports under {work}")


if __name__ == "__main__":
    run()
