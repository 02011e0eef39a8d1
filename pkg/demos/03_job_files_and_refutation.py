"""Driving the prover from job files, as the command line does.

A false claim is rejected before any approximation is attempted when an
end value of the normalized function is negative; a claim that fails only
inside the interval is caught by a sampled counterexample.
"""

import pathlib

from minimaxproof.cli import load_job, run_cli
from minimaxproof.prover import prove_nonneg

HERE = pathlib.Path(__file__).parent / "jobs"

for name in ("lemma_lower.job", "refute_example.job", "interior_dip.job"):
    job = load_job(HERE / name)
    cert = prove_nonneg(job)
    print(f"{name:22s} {cert.verdict:18s} witness={cert.witness}")

# the same through the command-line entry point (exit code 2 = refuted-candidate)
code = run_cli(["prove", str(HERE / "refute_example.job"), "--out", "/dev/null"])
print(f"exit code: {code}")
