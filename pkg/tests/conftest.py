"""
Pytest configuration and shared fixtures
"""
import tempfile
from pathlib import Path

import numpy as np
import pytest

from group_md.core.config import RunConfig
from group_md.links.factory import LinkFactory
from group_md.models.simplex import SimplexVector
from group_md.models.trace import IterationTrace, TraceRow
from group_md.scqp.instance import make_instance


@pytest.fixture
def temp_dir():
    """Create temporary directory for tests"""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def tsallis_link():
    """Tsallis link at the benchmark default q = 0.25"""
    return LinkFactory.create_link("tsallis:q=0.25")


@pytest.fixture
def natural_link():
    """Natural logarithm link"""
    return LinkFactory.create_link("natural")


@pytest.fixture
def small_instance():
    """Planted instance small enough for unit tests"""
    return make_instance(n=64, kappa=100.0, K=8, delta=5e-4, seed=3)


@pytest.fixture
def random_simplex():
    """Strictly positive random simplex point of length 10"""
    rng = np.random.default_rng(7)
    return SimplexVector.normalized(rng.uniform(0.1, 1.0, size=10))


@pytest.fixture
def small_config(temp_dir):
    """Desk-scale run configuration writing into a temporary directory"""
    return RunConfig(
        name="unit",
        instance={'n': 64, 'kappa': 100.0, 'K': 8},
        update={'algorithms': ['eg', 'geg', 'dmd'], 'link': 'tsallis:q=0.25', 'eta': 1.0},
        budget={'t_max': 30, 'stop_threshold': 1e-4},
        seeds={'instance_seed': 0, 'noise_seed': 100, 'n_runs': 2},
        output_dir=str(temp_dir / "results"),
    )


@pytest.fixture
def sample_trace():
    """Hand-built trace with a planted optimum"""
    trace = IterationTrace(header={
        'config': {'algorithm': 'dmd', 'link': 'tsallis:q=0.25'},
        't_max': 4,
        'loss_star': -0.5,
    })
    for t, (loss, fw, iou) in enumerate([(0.2, 1.0, 0.2), (-0.1, 0.5, 0.6),
                                          (-0.4, 0.2, 1.0), (-0.49, 0.01, 1.0)]):
        trace.append(TraceRow(
            t=t,
            loss=loss,
            rel_primal=loss + 0.5,
            fw_gap=fw,
            rel_fw=fw,
            delta_t=fw,
            iou=iou,
            nnz=10 - t,
        ))
    return trace
