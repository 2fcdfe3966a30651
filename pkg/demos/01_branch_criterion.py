"""Which residue sets give a sum that is rarely negative?

Expand the indicator of S mod m in characters and read off the verdict.
"""

from rmflab.characters import ResidueSet, character_table, decompose_indicator

for m, S in [(1, [1]), (4, [1]), (4, [3]), (5, [1, 4]), (5, [1]), (8, [1, 7]), (12, [1, 5, 7, 11])]:
    report = decompose_indicator(ResidueSet(m, S))
    kinds = character_table(m).kinds
    print(f"m={m:2d} S={S}: {report.verdict.value}")
    for j, (c, kind) in enumerate(zip(report.coefficients, kinds)):
        print(f"    chi_{j} ({kind.value:9s}) c = {complex(c):.4f}")
    if report.witness is not None:
        print(f"    witness: chi_{report.witness}")
