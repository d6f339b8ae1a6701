"""Build a small gene co-expression matrix end to end.

Writes a toy genes-by-cells table, ingests it with the log2 CPM transform,
scores every gene pair with aLDG, and prints the resulting matrix CSV. The
same flow is available from the shell as `depgap matrix`.
"""

import tempfile
from pathlib import Path

import numpy as np

from depgap import MeasureKind, ThresholdRule, pairwise_matrix
from depgap.cli import ExpressionMatrix, ingest, write_expression


def toy_counts(n_cells=60, seed=17):
    rng = np.random.default_rng(seed)
    driver = rng.gamma(2.0, 2.0, size=n_cells)
    rows = [
        rng.poisson(10.0 * driver),          # follows the driver
        rng.poisson(10.0 * driver + 2.0),    # follows it too
        rng.poisson(20.0, size=n_cells),     # background noise
        rng.poisson(5.0 * driver**2 / driver.mean()),  # nonlinear response
        rng.poisson(8.0, size=n_cells),      # more noise
        # High flat expression keeps library sizes stable, so the per-cell
        # normalization below does not divide the driver signal back out.
        rng.poisson(500.0, size=n_cells),
        rng.poisson(700.0, size=n_cells),
    ]
    gene_ids = [f"gene{i}" for i in range(len(rows) - 2)] + ["hk0", "hk1"]
    cell_ids = [f"cell{i}" for i in range(n_cells)]
    return ExpressionMatrix(gene_ids, cell_ids, np.array(rows, dtype=float))


def main():
    work = Path(tempfile.mkdtemp(prefix="depgap-demo-"))
    counts_path = work / "counts.csv"
    write_expression(toy_counts(), counts_path)
    print(f"wrote toy counts to {counts_path}")

    table = ingest(counts_path, transform="log2cpm1")
    kind = MeasureKind("aldg", {"rule": ThresholdRule.auto(seed=17)})
    result = pairwise_matrix(table.values, kind, threads=4, seed=17)

    print()
    header = ["gene"] + table.gene_ids
    print(",".join(header))
    for gid, row in zip(table.gene_ids, result.matrix):
        print(",".join([gid] + [f"{v:.3f}" for v in row]))
    if result.diagnostics:
        print(f"{len(result.diagnostics)} pairs failed: {result.diagnostics}")


if __name__ == "__main__":
    main()
