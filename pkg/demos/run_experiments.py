"""Run one canned experiment at desk scale and write its report files.

Every experiment in the registry returns an ExperimentReport; write_report
persists it as CSV plus JSON metadata, and optionally a minimal SVG plot.
Equivalent shell command: `depgap experiment noise-monotonicity --svg`.
"""

from depgap import EXPERIMENTS, write_report


def main():
    print("registered experiments:", ", ".join(EXPERIMENTS))
    print()

    run = EXPERIMENTS["noise-monotonicity"]
    report = run(n=60, trials=8, families=("linear", "sine"), seed=12, threads=4)

    print(",".join(report.columns))
    for row in report.rows:
        print(",".join(str(c) for c in row))

    paths = write_report(report, "depgap-reports", svg=True)
    print()
    for kind, path in paths.items():
        print(f"{kind:5s} {path}")


if __name__ == "__main__":
    main()
