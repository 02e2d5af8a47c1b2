"""Walk-return recurrences checked in exact rational arithmetic.

The alternating walk multiplies by an inverse generator on odd steps and
a plain one on even steps, with an optional lazy weight spent only at the
identity.  Dynamic programming over group elements gives the return
tables; the recurrences the generating-function argument rests on are
then checked coefficient by coefficient, with no floats anywhere.
"""

from fractions import Fraction as F

from leinert import (
    WalkWeights,
    dp_tables,
    generating_functions,
    parse_signature,
    verify_recurrences,
)

sig = parse_signature("F2xF2")


def show(tables, label):
    print(f"\n{label}")
    print("  even returns mu:", [str(x) for x in tables.even_returns])
    residuals = verify_recurrences(tables)
    for name, value in residuals.items():
        mark = "exact" if value == 0 else f"breaks, residual {value}"
        print(f"  {name:>16}: {mark}")
    bundle = generating_functions(tables)
    for name, value in bundle.residuals.items():
        mark = "exact" if value == 0 else f"residual {value}"
        print(f"  gf {name:>17}: {mark}")


# no lazy weight: the return and excursion identities hold exactly until
# minimal bad strings enter at step 8, where the masked-walk identity
# misses by precisely their weight
weights = WalkWeights(F(0), {b: F(1, 8) for b in sig.bases()})
tables = dp_tables(sig, weights, 5)
show(tables, "F2xF2, a = 1/8, no lazy weight")

gen = next(iter(tables.detour_returns))
d8 = tables.detour_returns[gen][8]
print(f"\n  detour weight at step 8 per generator: {d8} = 4 * (1/8)^8")
print("  (four minimal bad strings open with each inverse generator)")

# a lazy weight keeps the mu/p recurrences exact but perturbs the
# excursion split by (a * alpha0)^2 from step 4 on
weights = WalkWeights(F(1, 9), {b: F(1, 9) for b in sig.bases()})
show(dp_tables(sig, weights, 5), "F2xF2, a = 1/9, lazy weight 1/9")

# on F1xF1 only exponent sums matter, every identity is exact, and the
# returns collapse to central binomials
sig11 = parse_signature("F1xF1")
weights = WalkWeights(F(0), {b: F(1, 4) for b in sig11.bases()})
tables = dp_tables(sig11, weights, 6)
show(tables, "F1xF1, a = 1/4")
print("\n  mu equals C(2n,n)/16^n here:", [str(x) for x in tables.even_returns[:4]], "...")
