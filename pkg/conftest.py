"""
Shared fixtures: small seeded instances, random streams and temporary instance directories
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from problems import generate_cvrp, generate_fjsp, save_instance  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_fjsp():
    return generate_fjsp(7, 3, 3)


@pytest.fixture
def fjsp_5j5m():
    return generate_fjsp(11, 5, 5)


@pytest.fixture
def small_cvrp():
    return generate_cvrp(5, 12)


@pytest.fixture
def fjsp_dir(tmp_path):
    """Directory of four 3j3m instances with a two/two manifest"""
    import json

    names = []
    for i in range(4):
        name = f"fjsp_3j3m_{i:04d}.json"
        save_instance(tmp_path / name, generate_fjsp(100 + i, 3, 3))
        names.append(name)
    manifest = {"problem": "fjsp", "size": "3j3m", "seed": 0, "distribution": None, "train": names[:2], "test": names[2:]}
    (tmp_path / "manifest.json").write_text(json.dumps(manifest), encoding="utf-8")
    return tmp_path
