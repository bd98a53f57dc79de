"""Numerical non-existence of odd-coefficient solutions in the c = 0 case.

Within the quartic regime the surviving series shape still allows j1, j3
and k1 a priori; multistart sweeps with one of them pinned away from zero
show what actually happens:

  * j1 or j3 pinned to 0.1: no root converges anywhere on the grid;
  * k1 pinned to 0.1 (wave speed left free): the only roots that appear
    have sigma ~ 0, i.e. they are not traveling waves.  A resonant
    parameter value a = -k1^2 / (4 lam^2 m^2) is included so such roots
    are actually exhibited rather than vacuously absent.
"""

from fractions import Fraction as F

from abcdwaves import reproduce_nonexistence


def main():
    grid_j = [{"a": a, "b": b, "d": d, "lam": 1, "m": F(3, 4), "sigma": 1}
              for a in (1, -1) for b in (-1, 2) for d in (F(1, 3), 1)]
    for var in ("j1", "j3"):
        rep = reproduce_nonexistence(var, grid_j, n_starts=250, seed=0)
        print(f"{var} pinned to {rep.value} (|{var}| >= {rep.delta} band, "
              f"sigma pinned): {rep.total_roots} converged roots over "
              f"{len(rep.points)} grid points -> "
              f"{'no solutions, as claimed' if rep.upheld else 'COUNTEREXAMPLE'}")

    grid_k = [{"a": a, "b": b, "d": d, "lam": 1, "m": F(1, 2), "sigma": 1}
              for a in (1, F(-1, 100)) for b in (-1, 2) for d in (F(1, 3), 1)]
    rep = reproduce_nonexistence("k1", grid_k, n_starts=250, seed=7)
    sigmas = [abs(r["sigma"]) for pt in rep.points for r in pt.roots]
    print(f"k1 pinned to {rep.value} (sigma free): {rep.total_roots} roots, "
          f"largest |sigma| = {max(sigmas) if sigmas else 0:.1e} -> "
          f"{'all have sigma ~ 0, as claimed' if rep.upheld else 'COUNTEREXAMPLE'}")
    shown = 0
    for pt in rep.points:
        for root in pt.roots:
            if shown < 3:
                vals = {k: round(v, 6) for k, v in root["values"].items()}
                print(f"   example sigma~0 root at a={pt.pins['a']}: {vals}")
                shown += 1


if __name__ == "__main__":
    main()
