import numpy as np
import pytest

from revshor.blocks import BLOCKS, build_block

ACCEPTANCE_LINES: list[str] = []


def all_basis_states(width: int) -> np.ndarray:
    idx = np.arange(1 << width, dtype=np.int64)
    return ((idx[None, :] >> np.arange(width, dtype=np.int64)[:, None]) & 1).astype(bool)


def block_instances(max_w: int):
    """(name, w, params) for every registered classical block and variant up to ``max_w``."""
    for name, spec in BLOCKS.items():
        if name == "modexp":
            continue
        for w in range(spec.min_w, max_w + 1):
            if name == "ctrl_mul_mod_const":
                plist = [{"A": a, "N": N} for N in range(3, 1 << (w - 1), 2) for a in range(1, N)
                         if np.gcd(a, N) == 1]
            elif spec.params:
                plist = [{}] + [{"A": a, "N": N} for N in range(2, 1 << (w - 1)) for a in range(N)]
            else:
                plist = [{}]
            for p in plist:
                yield name, w, p


@pytest.fixture
def acceptance_line():
    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


__all__ = ["all_basis_states", "block_instances", "build_block"]
