"""
Unit tests for run configuration
"""
from pathlib import Path

import pytest
import yaml
from pydantic import ValidationError

from group_md.core.config import BudgetSpec, InstanceSpec, RunConfig, SweepSpec, UpdateSpec, merge_overrides

CONFIG_DIR = Path(__file__).resolve().parents[2] / "config"


def _write(path: Path, data: dict) -> Path:
    with open(path, "w") as f:
        yaml.safe_dump(data, f)
    return path


class TestRunConfig:
    """Test RunConfig loading"""

    def test_defaults(self):
        """Test the benchmark defaults"""
        config = RunConfig()
        assert config.instance.n == 1000
        assert config.instance.kappa == 1000.0
        assert config.instance.K == 100
        assert config.update.algorithms == ['eg', 'geg', 'dmd']
        assert config.update.link == 'tsallis:q=0.25'
        assert config.budget.t_max == 200

    def test_from_yaml(self, temp_dir):
        """Test loading a file"""
        path = _write(temp_dir / "run.yaml", {
            'name': 'tiny',
            'instance': {'n': 50, 'kappa': 10.0, 'K': 5},
            'update': {'algorithms': ['MMD_GEG', 'dmd'], 'link': 'tsallis:q=0.50'},
            'budget': {'t_max': 40},
        })
        config = RunConfig.from_yaml(str(path))
        assert config.name == 'tiny'
        assert config.instance.K == 5
        assert config.update.algorithms == ['mmd-geg', 'dmd']
        assert config.update.link == 'tsallis:q=0.5'
        assert config.budget.stop_threshold == 1e-4

    def test_overrides_win(self, temp_dir):
        """Test nested overrides are merged over the file"""
        path = _write(temp_dir / "run.yaml", {'instance': {'n': 50, 'K': 5}, 'seeds': {'n_runs': 3}})
        config = RunConfig.from_yaml(str(path), {'instance': {'kappa': 2.0}, 'seeds': {'n_runs': 1}})
        assert config.instance.n == 50
        assert config.instance.kappa == 2.0
        assert config.seeds.n_runs == 1

    def test_missing_file(self):
        """Test a missing file raises FileNotFoundError"""
        with pytest.raises(FileNotFoundError):
            RunConfig.from_yaml("/nonexistent/config.yaml")

    def test_empty_file(self, temp_dir):
        """Test an empty file yields defaults"""
        path = temp_dir / "empty.yaml"
        path.write_text("")
        assert RunConfig.from_yaml(str(path)).instance.n == 1000

    def test_environment_fills_unset_fields(self, monkeypatch):
        """Test GROUP_MD_ variables configure fields left unset"""
        monkeypatch.setenv("GROUP_MD_BUDGET__T_MAX", "7")
        monkeypatch.setenv("GROUP_MD_LOGGING__LEVEL", "DEBUG")
        config = RunConfig()
        assert config.budget.t_max == 7
        assert config.logging.level == "DEBUG"

    def test_explicit_values_beat_environment(self, monkeypatch):
        """Test init values take priority over the environment"""
        monkeypatch.setenv("GROUP_MD_NAME", "from-env")
        assert RunConfig(name="explicit").name == "explicit"

    def test_to_dict_is_json_safe(self, small_config):
        """Test to_dict round-trips through the constructor"""
        data = small_config.to_dict()
        assert data['instance']['n'] == 64
        assert RunConfig(**data).to_dict() == data

    @pytest.mark.parametrize("preset", sorted(p.name for p in (CONFIG_DIR / "experiments").glob("*.yaml")))
    def test_shipped_presets_load(self, preset):
        """Test every preset validates"""
        config = RunConfig.from_yaml(str(CONFIG_DIR / "experiments" / preset))
        assert config.seeds.n_runs >= 1

    def test_default_config_file(self):
        """Test the shipped default matches the convergence setup"""
        config = RunConfig.from_yaml(str(CONFIG_DIR / "config.yaml"))
        assert config.instance.n == 1000
        assert config.budget.t_max == 200
        assert config.instance.snr_db is None


class TestValidation:
    """Test field-level validation"""

    def test_tsallis_q_one_rejected(self):
        """Test q = 1 is rejected before any run"""
        with pytest.raises(ValidationError, match="update.link|link"):
            RunConfig(update={'link': 'tsallis:q=1.0'})

    def test_unknown_algorithm(self):
        """Test unknown algorithms are rejected"""
        with pytest.raises(ValidationError, match="Unsupported algorithm"):
            UpdateSpec(algorithms=['adam'])

    def test_empty_algorithms(self):
        """Test an empty algorithm list"""
        with pytest.raises(ValidationError):
            UpdateSpec(algorithms=[])

    def test_support_larger_than_dimension(self):
        """Test K > n"""
        with pytest.raises(ValidationError, match="exceeds"):
            InstanceSpec(n=10, K=11)

    def test_support_fraction(self):
        """Test k_fraction resolves K"""
        assert InstanceSpec(n=2000, k_fraction=0.1).K == 200
        assert InstanceSpec(n=10, k_fraction=0.01).K == 1

    def test_infinite_snr_means_exact(self):
        """Test +inf is stored as None"""
        assert InstanceSpec(snr_db=float('inf')).snr_db is None
        assert InstanceSpec(snr_db=-5.0).snr_db == -5.0
        with pytest.raises(ValidationError):
            InstanceSpec(snr_db=float('nan'))

    @pytest.mark.parametrize("field,value", [
        ('n', 1),
        ('kappa', 0.5),
        ('delta', 0.0),
    ])
    def test_instance_ranges(self, field, value):
        """Test out-of-range instance parameters"""
        with pytest.raises(ValidationError):
            InstanceSpec(**{field: value})

    def test_budget_ranges(self):
        """Test budget bounds"""
        with pytest.raises(ValidationError):
            BudgetSpec(t_max=0)
        with pytest.raises(ValidationError):
            BudgetSpec(stop_threshold=-1.0)
        assert BudgetSpec(stop_threshold=0.0).stopping_rule().threshold == 0.0

    def test_sweep_axis(self):
        """Test sweep axes and values"""
        assert SweepSpec(axis='q', values=[0.1]).axis == 'q'
        with pytest.raises(ValidationError):
            SweepSpec(axis='eta', values=[0.1])
        with pytest.raises(ValidationError):
            SweepSpec(axis='q', values=[])

    def test_update_config(self):
        """Test UpdateSpec builds per-algorithm configurations"""
        spec = UpdateSpec(link='tsallis:q=0.5', eta=0.5)
        assert spec.update_config('dmd').link == 'tsallis:q=0.5'
        assert spec.update_config('eg').link == 'natural'
        assert spec.update_config('dmd').eta == 0.5


class TestMergeOverrides:
    """Test merge_overrides"""

    def test_nested_merge(self):
        """Test nested keys merge and scalars replace"""
        base = {'a': {'x': 1, 'y': 2}, 'b': 1}
        merged = merge_overrides(base, {'a': {'y': 3}, 'b': {'z': 4}})
        assert merged == {'a': {'x': 1, 'y': 3}, 'b': {'z': 4}}
        assert base == {'a': {'x': 1, 'y': 2}, 'b': 1}
