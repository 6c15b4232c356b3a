import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from clsfront.cls_core import default_inventory
from clsfront.config import RunConfig
from clsfront.mcd_eval import write_pcm_wav
from clsfront.phonotactics import load_packs

settings.register_profile(
    "thorough", max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)

import time

SUITE_LIMIT_S = 60.0
_criteria = []
_started = [None]


def pytest_sessionstart(session):
    _started[0] = time.perf_counter()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    _criteria.append((marker.args[0], call.excinfo is None))


def pytest_sessionfinish(session, exitstatus):
    if not _criteria:
        return
    elapsed = time.perf_counter() - _started[0]
    ok = elapsed < SUITE_LIMIT_S
    _criteria.append((f"runtime: full suite < {SUITE_LIMIT_S:.0f} s ({elapsed:.1f} s)", ok))
    if not ok and exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in _criteria:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")


@pytest.fixture(scope="session")
def inv():
    return default_inventory()


@pytest.fixture(scope="session")
def cfg():
    return RunConfig.create()


@pytest.fixture(scope="session")
def packs():
    return load_packs()


@pytest.fixture(scope="session")
def profile(cfg):
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = cfg.profile(name)
        return cache[name]

    return get


@pytest.fixture
def wav(tmp_path):
    """Write samples to a temporary mono 16-bit WAV and return its path."""
    counter = iter(range(10**6))

    def make(samples, sample_rate=16000, name=None):
        path = tmp_path / (name or f"sig{next(counter)}.wav")
        write_pcm_wav(path, samples, sample_rate)
        return path

    return make


def tone(freq, seconds, sample_rate=16000, amp=0.5):
    t = np.arange(int(seconds * sample_rate)) / sample_rate
    return amp * np.sin(2 * np.pi * freq * t)
