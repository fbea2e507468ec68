#!/usr/bin/env python3
"""
Sideband cooling demonstration: RWA versus the full linearized model
"""
import os
import sys
import time

# Add the project directory to path to find the optocool package
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
import numpy as np

import optocool
from optocool import (PhysicalParams, build_system, cooling_comparison, min_phonon_breakdown,
                      minimize_over_detuning, phonon_number, steady_state)


def demo_red_sideband():
    """Steady phonon number at Δ = −ωm for a few coupling strengths."""
    print("❄️  Red-Sideband Cooling (κ = 0.5 ωm, n̄ = 1000)")
    print("=" * 50)
    print(f"{'g/ωm':>6} {'N_b RWA':>12} {'N_b full':>12} {'formula':>10}")
    for g in (0.05, 0.1, 0.2, 0.3):
        params = PhysicalParams(kappa=0.5, gamma_m=1e-5, delta=-1.0, g=g, n_bar=1e3)
        comparison = cooling_comparison(params)
        estimate = min_phonon_breakdown(params.kappa, g, 1.0, params.gamma_m * params.n_bar)
        print(f"{g:6.2f} {comparison.n_b_rwa:12.5f} {comparison.n_b_full:12.5f} "
              f"{estimate.total:10.5f}")


def demo_detuning_scan():
    """Phonon number across the detuning window, with the optimum refined."""
    print("\n🔍 Detuning Scan (full model, g = 0.2 ωm)")
    print("-" * 40)
    base = PhysicalParams(kappa=0.5, gamma_m=1e-5, delta=-1.0, g=0.2, n_bar=1e3)
    for delta in np.linspace(-1.6, -0.4, 7):
        n_b = phonon_number(steady_state(build_system(base.replace(delta=delta), rwa=False)))
        bar = "█" * max(1, int(4 / max(n_b, 0.05)))
        print(f"   Δ = {delta:+.2f}  N_b = {n_b:8.4f}  {bar}")

    start = time.time()
    delta_star, n_star = minimize_over_detuning(base, (-2.0, 0.0), "full")
    elapsed = time.time() - start
    print(f"\n   Optimum: Δ* = {delta_star:+.6f} ωm, N_b = {n_star:.5f} ({elapsed:.2f}s)")


def main():
    print(f"🧊 optocool {optocool.__version__} cooling demo\n")
    demo_red_sideband()
    demo_detuning_scan()
    print("\n✅ Done")


if __name__ == "__main__":
    main()
