#!/usr/bin/env python3
"""Smoke test for the Python bindings.

Builds the extension with cargo if needed, loads it straight from the target
directory, and exercises every exposed entry point.

Usage: python3 python/smoke_test.py [--release]
"""

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_extension(release: bool) -> Path:
    cmd = ["cargo", "build", "-p", "sl2sheaf-py"]
    if release:
        cmd.append("--release")
    subprocess.run(cmd, cwd=ROOT, check=True)
    profile = "release" if release else "debug"
    lib = ROOT / "target" / profile / "libsl2sheaf_py.so"
    if not lib.exists():  # macOS
        lib = ROOT / "target" / profile / "libsl2sheaf_py.dylib"
    if not lib.exists():
        sys.exit(f"built library not found under target/{profile}")
    return lib


def load_module(lib: Path, workdir: Path):
    target = workdir / "sl2sheaf_py.so"
    shutil.copyfile(lib, target)
    sys.path.insert(0, str(workdir))
    import sl2sheaf_py

    return sl2sheaf_py


def main() -> None:
    release = "--release" in sys.argv[1:]
    lib = build_extension(release)
    with tempfile.TemporaryDirectory() as tmp:
        s = load_module(lib, Path(tmp))

        # Module construction and basic attributes.
        v2 = s.Module.weyl(5, 2)
        assert v2.dim() == 3 and v2.p() == 5, (v2.dim(), v2.p())
        assert "weyl(2)" in repr(v2), repr(v2)
        assert "s^2" in v2.theta()

        # Constant Jordan type of a Weyl module.
        prof = json.loads(v2.jordan_profile())
        assert prof["generic"] == "[3]" and prof["exceptional"] == [], prof
        assert v2.local_jordan_type("1,1") == "[3]"
        assert v2.local_jordan_type("0,1") == "[3]"

        # A twisted module with one exceptional point.
        phi = s.Module.phi(5, 7, "1,1")
        prof = json.loads(phi.jordan_profile())
        assert prof["generic"] == "[5]", prof
        assert len(prof["exceptional"]) == 1, prof
        assert prof["exceptional"][0]["type"] == "[3][2]", prof
        assert phi.local_jordan_type("1,1") == "[3][2]"
        assert phi.local_jordan_type("1,2") == "[5]"

        # The same family over an extension point.
        phi_ext = s.Module.phi(5, 7, "ext:2")
        prof = json.loads(phi_ext.jordan_profile())
        assert prof["exceptional"][0]["point"] == ["1", "u"], prof
        assert prof["exceptional"][0]["field"]["e"] == 2, prof

        # Kernel sheaf splitting types.
        ker = json.loads(s.Module.dual_weyl(5, 7).kernel())
        assert ker["splitting"] == [-2, -2], ker
        assert ker["certified"], ker

        # Filtration layers of V(7): one line bundle, all other layers zero.
        f3 = json.loads(s.Module.weyl(5, 7).fi(3))
        assert f3["splitting"] == [-7], f3
        f2 = json.loads(s.Module.weyl(5, 7).fi(2))
        assert f2["splitting"] == [], f2

        # Heller shifts.
        assert json.loads(s.heller_shift(5, 4))["projective"]
        omega = json.loads(s.heller_shift(5, 2))
        assert omega["shift"] == "V(6)" and omega["dim"] == 7, omega

        # Error paths surface as Python exceptions.
        for bad in (
            lambda: s.Module.weyl(2, 1),
            lambda: s.Module.projective(5, 7),
            lambda: s.Module.phi(5, 7, "0,0"),
            lambda: s.Module.phi(5, 7, "ext:2:4,0"),
        ):
            try:
                bad()
            except ValueError:
                pass
            else:
                sys.exit("expected ValueError")

        # The verification suite end to end.
        checks = json.loads(s.verify_all(3, 9))
        assert len(checks) >= 7 and all(c["passed"] for c in checks), checks

    print("smoke test passed")


if __name__ == "__main__":
    main()
