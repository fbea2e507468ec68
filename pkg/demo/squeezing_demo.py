#!/usr/bin/env python3
"""
Quadrature squeezing of the hybrid modes d± and the stability boundary
"""
import os
import sys

# Add the project directory to path to find the optocool package
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from optocool import (FieldKind, PhysicalParams, build_system, classify_field,
                      locate_stability_boundary, stability, steady_state, variance_asymptotic,
                      variances)


def demo_variances():
    """Variances against the vacuum level 1/2 as the coupling grows."""
    print("🌊 Hybrid-Mode Variances at Δ = −ωm (κ = 0.5 ωm)")
    print("=" * 58)
    print(f"{'g/ωm':>6} {'X+':>8} {'Y+':>8} {'X-':>8} {'Y-':>8}  verdict")
    for g in (0.1, 0.2, 0.3, 0.4):
        params = PhysicalParams(kappa=0.5, gamma_m=1e-5, delta=-1.0, g=g, n_bar=1e3)
        system = build_system(params, rwa=False)
        if not stability(system).stable:
            print(f"{g:6.2f}  unstable")
            continue
        vs = variances(steady_state(system))
        verdicts = [classify_field(vs, field) for field in ("d+", "d-")]
        squeezed = [f"{v.field_id}:{v.squeezed_quadrature}" for v in verdicts
                    if v.classification is FieldKind.SQUEEZED]
        print(f"{g:6.2f} {vs.var_X_plus:8.4f} {vs.var_Y_plus:8.4f} "
              f"{vs.var_X_minus:8.4f} {vs.var_Y_minus:8.4f}  {', '.join(squeezed) or '-'}")

    y_plus, x_minus = variance_asymptotic(0.5, 0.2, 1.0, 1e-2)
    print(f"\n📐 Asymptotic formula at g = 0.2: Y+ = {y_plus:.4f}, X- = {x_minus:.4f}")


def demo_boundary():
    """Where the full model stops having a steady state."""
    print("\n⚠️  Stability Boundary in g")
    print("-" * 30)
    base = PhysicalParams(kappa=0.5, gamma_m=1e-5, delta=-1.0, g=0.2, n_bar=1e3)
    boundary = locate_stability_boundary(base, "g", 0.0, 1.0)
    print(f"   Stability lost at g = {boundary.value:.6f} ωm")
    print(f"   D = 0 estimate:     g = {boundary.reference:.6f} ωm")
    print(f"   Offset:             {boundary.offset:+.2e}")


def main():
    demo_variances()
    demo_boundary()
    print("\n✅ Done")


if __name__ == "__main__":
    main()
