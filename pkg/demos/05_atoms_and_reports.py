"""Atomic realization (shuttled atoms, one cavity) and the consolidated
experiment report with its JSON form.

Run: python3 demos/05_atoms_and_reports.py
"""

import json
import math

from cavityphase import (
    ExperimentConfig,
    run_experiment,
    schedule_atoms,
    solve_parameters,
    timing_budget,
)

TWO_PI = 2.0 * math.pi

# Microwave-cavity numbers: g/2pi = 50 kHz, retune and shuttle overheads
# of a microsecond each.
params = solve_parameters(TWO_PI * 50e3, k=0, omega_ratio=15, n=2)
schedule = schedule_atoms(params, tau_a=1e-6, tau_m=1e-6)
print("atomic schedule:")
for step in schedule.steps:
    print(f"  step {step.label:>3}: {step.duration * 1e6:.1f} us")
for name, value in sorted(schedule.extra_times.items()):
    print(f"  {name}: {value * 1e6:.1f} us")
print(f"  wall time: {schedule.wall_time * 1e6:.1f} us")

budget = timing_budget(schedule, t1=3e-2, t2=3e-2, q=2e8, cavity_freq=TWO_PI * 51.2e9)
print(f"\nphoton lifetime Q/omega_c = {budget.kappa_inv * 1e6:.0f} us")
print(f"cavity margin: {budget.margins['cavity']:.2e}")
for warning in schedule.warnings:
    print(f"note: {warning}")

# The same physics through the batch interface, at quick settings.
config = ExperimentConfig(
    realization="atomic",
    n=1,
    g_hz=50e3,
    omega_ratio=12,
    fock_cutoff=3,
    tol=1e-4,
    cavity_states=("vacuum", "fock:1"),
)
report = run_experiment(config)
print("\nreport summary:")
print(f"  effective fidelity: {report.effective_fidelity:.12f}")
for label, fid in report.full_fidelities.items():
    print(f"  full fidelity [{label}]: {fid:.6f}")
print(f"  spread: {report.fidelity_spread:.2e}")
print(f"  leakage estimate p2 ({report.leakage['kind']}): {report.leakage['p2']:.4f}")
print("\nfirst lines of the JSON report:")
text = json.dumps(report.to_json_dict(), indent=2, sort_keys=True)
print("\n".join(text.splitlines()[:12]))
