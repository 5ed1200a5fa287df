"""
System check utility for the TRK toolkit.
Verifies that the numerical stack imports and that LAPACK works.
"""

import importlib
import sys
from typing import Dict


REQUIRED_PACKAGES = ('numpy', 'scipy', 'sklearn', 'pandas')


def check_package(name: str) -> bool:
    """Check that a package imports and report its version."""
    try:
        module = importlib.import_module(name)
    except ImportError as e:
        print(f"❌ {name} not importable: {e}")
        print(f"📦 Install with: pip install -r requirements.txt")
        return False
    print(f"✅ {name} found: version {getattr(module, '__version__', 'unknown')}")
    return True


def check_lapack() -> bool:
    """Factorize a small Gaussian correlation matrix with LAPACK Cholesky."""
    try:
        import numpy as np
        from scipy.linalg import cholesky

        points = np.linspace(0.0, 1.0, 5).reshape(-1, 1)
        R = np.exp(-10.0 * (points - points.T) ** 2)
        C = cholesky(R, lower=True)
        if not np.allclose(C @ C.T, R):
            print("❌ LAPACK Cholesky returned an inaccurate factor")
            return False
        print("✅ LAPACK Cholesky works")
        return True
    except Exception as e:
        print(f"❌ Error checking LAPACK: {e}")
        return False


def run_system_checks() -> bool:
    """
    Run all system checks.

    Returns:
        bool: True if all required dependencies are available
    """
    print("\n" + "="*50)
    print("🔍 Running System Dependency Checks")
    print("="*50)

    checks: Dict[str, bool] = {name: check_package(name) for name in REQUIRED_PACKAGES}
    checks['LAPACK'] = checks['numpy'] and checks['scipy'] and check_lapack()

    print("\n" + "="*50)
    print("📊 System Check Summary")
    print("="*50)

    for name, status in checks.items():
        status_icon = "✅" if status else "❌"
        print(f"{status_icon} {name}: {'OK' if status else 'MISSING'}")

    all_passed = all(checks.values())
    if all_passed:
        print("\n✅ All system dependencies are available!")
    else:
        print("\n❌ CRITICAL: the numerical stack is incomplete; fitting will not work.")

    print("="*50 + "\n")
    return all_passed


if __name__ == '__main__':
    if not run_system_checks():
        sys.exit(1)
