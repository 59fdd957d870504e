"""Flux-tunable charge qubits coupled to a coplanar-waveguide resonator:
from circuit parameters to protocol frequencies, gate-voltage amplitudes,
flux biases, charge-noise exposure and the timing budget.

Run: python3 demos/04_charge_circuit.py
"""

import math

from scipy.constants import e as E_CHARGE
from scipy.constants import h as PLANCK
from scipy.constants import hbar as HBAR

from cavityphase import (
    CircuitParams,
    charge_qubit_map,
    degeneracy_deviations,
    schedule_charge,
    solve_parameters,
    timing_budget,
)
from cavityphase.hamiltonians import quantum_voltage

TWO_PI = 2.0 * math.pi

# Reference design: E_J0/h = 5 GHz, E_c/h = 32 GHz, 10 mm resonator at
# 10 GHz with 0.16 nF/m.  The gate capacitance is chosen so the zero-point
# voltage produces g/2pi = 22 MHz.
cavity_freq = TWO_PI * 10e9
e_c = PLANCK * 32e9
length, cap_per_length = 0.010, 1.6e-10
v0_qu = quantum_voltage(cavity_freq, length, cap_per_length)
c_g = TWO_PI * 22e6 * HBAR * E_CHARGE / (2.0 * e_c * v0_qu)
circuit = CircuitParams(
    e_j0=PLANCK * 5e9,
    e_c=e_c,
    c_g=c_g,
    v0=1e-3,
    flux_ratio=0.0,
    length=length,
    cap_per_length=cap_per_length,
)

w0, rabi_max, g = charge_qubit_map(circuit, cavity_freq)
print(f"zero-point gate voltage: {v0_qu * 1e6:.3f} uV")
print(f"gate capacitance:        {c_g * 1e18:.2f} aF")
print(f"flux 0:   nu0 = {w0 / TWO_PI / 1e9:.3f} GHz (4 E_J0/h)")
print(f"coupling: g/2pi = {g / TWO_PI / 1e6:.3f} MHz (detuning-independent)")

params = solve_parameters(g, k=0, omega_ratio=15, n=2)
print(
    f"\nsolved drives: omega'/2pi = {params.omega_prime / TWO_PI / 1e6:.0f} MHz, "
    f"omega1/2pi = {params.omega1 / TWO_PI / 1e6:.0f} MHz, "
    f"omega_r/2pi = {params.omega_r / TWO_PI / 1e6:.0f} MHz"
)
print(f"total dynamical time: {params.t_op * 1e9:.1f} ns")

schedule = schedule_charge(params, circuit, cavity_freq)
print("\nper-step realization (qubit 1 = control):")
for step in schedule.steps:
    ann = step.annotations
    print(
        f"  step {step.label:>3}: nu0(q1) = {ann['qubit_freq_hz_q1'] / 1e9:.4f} GHz "
        f"(flux {ann['flux_ratio_q1']:.4f}), V0(q1) = {ann['v0_volts_q1'] * 1e6:.2f} uV, "
        f"V0(q2) = {ann['v0_volts_q2'] * 1e6:.2f} uV"
    )

eps = degeneracy_deviations(
    params.omega, params.omega_prime, params.omega1, params.omega_r, g, g, e_c
)
print("\ncharge-noise exposure (gate-charge deviations from degeneracy):")
for name, value in zip(("step i", "step ii", "step iii ctrl", "step iii tgt"), eps):
    print(f"  {name:>14}: {value:.3e}")

budget = timing_budget(schedule, t1=5e-6, t2=1e-6, q=1e5, cavity_freq=cavity_freq)
print(f"\ntiming: t_op = {budget.t_op * 1e9:.1f} ns, kappa^-1 = {budget.kappa_inv * 1e6:.2f} us")
for name, value in sorted(budget.margins.items()):
    print(f"  margin {name}: {value:.3g}")
for warning in schedule.warnings:
    print(f"note: {warning}")
