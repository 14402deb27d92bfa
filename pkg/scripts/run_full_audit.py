#!/usr/bin/env python3
"""Drive every registered verification plus the full unreachability proof and
print a one-line result per stage.  Exit code 0 iff everything passes.

    python3 scripts/run_full_audit.py [--seed N]
"""

import argparse

from cremona_links.report import (ReportConfig, VERIFY_TARGETS,
                                  build_prove_report, build_verify_report)


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()
    config = ReportConfig(seed=args.seed)
    failures = 0
    for check_id in sorted(VERIFY_TARGETS):
        ok, report = build_verify_report(check_id, config)
        n = len(report["checks"])
        tag = "PASS" if ok else "FAIL"
        print(f"{tag} verify {check_id:<18} ({n} checks) - {report['title']}")
        if not ok:
            failures += 1
            print(f"     first failure: {report['first_failure']}")
    ok, report = build_prove_report(config)
    tag = "PASS" if ok else "FAIL"
    rc = report["restriction_contrast"]
    print(f"{tag} prove: verdict={report['verdict']}, "
          f"golden={report['golden_tree_match']}, "
          f"contrast={rc['equivariance_passes']}/{rc['samples']} with "
          f"negative control failed={rc['negative_control_failed']}")
    print()
    print(report["certification"]["exit_coefficient_line"])
    print(report["certification"]["elementary_multiplicity_line"])
    if not ok:
        failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
