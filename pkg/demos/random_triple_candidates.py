"""
Candidates for a few random coprime triples.

Each spanning subgraph of the critical graph fixes a section of sqrt(D);
a candidate survives when the section is consistent and every pole of the
unbounded branch has a simple real residue. Survivors have total mass equal
to the marked branch value alpha at infinity.
"""
import warnings
from collections import Counter

import numpy as np

from motherbody import mother
from motherbody.errors import MotherbodyError
from motherbody.polyalg import UniPoly, coprime
from motherbody.quaddiff import build_DK0, build_theta

rng = np.random.default_rng(7)
tally = Counter()
done = 0
while done < 6:
    P = UniPoly(list(rng.normal(size=2)) + [1.0])
    Q, R = UniPoly(list(rng.normal(size=2))), UniPoly(list(rng.normal(size=1)))
    if not coprime(P, Q):
        continue
    done += 1
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            qd = build_theta(P, Q, R)
            cands = mother.enumerate_candidates(qd, build_DK0(qd))
    except MotherbodyError as exc:
        print(done, "rejected:", exc.code)
        tally[exc.code] += 1
        continue
    for c in cands:
        tally[c.status] += 1
        if c.measure is not None:
            print(done, c.subgraph, f"mass={c.measure.total_mass:.6f}",
                  f"alpha={c.section.alpha:.6f}", "positive" if c.positive else "signed")
print(dict(tally))
