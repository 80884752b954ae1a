"""Do general projections to P^2 keep few points on lines and conics?

Random configurations with planted lines, conics and twisted cubics (each
within the limits nodes of a degree-n hypersurface must respect) are
projected from a random line; we measure how many images land on a single
line or conic and compare with k(n-1).  Excesses that vanish when the
projection is redrawn are blamed on a special center.
"""

from collections import Counter

import numpy as np

from nodalfact import GF, conjecture15_fuzz, make_rng
from nodalfact.config import fuzz_configuration

for n in (5, 6):
    rep = conjecture15_fuzz(n, trials=200, rng=make_rng(15 + n))
    worst = {k: max(r["image_max"][k] for r in rep["rows"]) for k in rep["ks"]}
    plants = Counter(kind for r in rep["rows"] for kind, _ in r["plants"])
    print(f"n={n}: {rep['trials']} trials, planted {dict(plants)}")
    print(f"  largest image counts {worst} vs bounds "
          f"{ {k: k * (n - 1) for k in rep['ks']} }")
    print(f"  persistent violations {rep['violations']}, "
          f"special centers {len(rep['special_centers'])}")

# any trial can be rebuilt from its recorded seed
rep = conjecture15_fuzz(5, trials=3, rng=make_rng(1))
row = rep["rows"][2]
sigma, info = fuzz_configuration(5, np.random.default_rng(row["seed"]), GF())
print(f"\nreplay of trial 2 from seed {row['seed']}: {len(sigma)} points, "
      f"same plants: {info['plants'] == row['plants']}")
