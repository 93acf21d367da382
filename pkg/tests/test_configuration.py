import pytest
import yaml

import hgpy
import hgpy.configuration as hgconfiguration


def test_load_configuration(tmp_path, restore_config):
    path = tmp_path / 'limits.yaml'
    path.write_text('VERIFY_RANDOM_TRIALS: 7\nORACLE_MAX_ENUMERATION_BITS: 12\n')

    data = hgconfiguration.load_configuration(str(path))
    assert data == {'VERIFY_RANDOM_TRIALS': 7, 'ORACLE_MAX_ENUMERATION_BITS': 12}
    assert restore_config.VERIFY_RANDOM_TRIALS == 7
    assert restore_config.PRESERVED_ORDER == ['VERIFY_RANDOM_TRIALS', 'ORACLE_MAX_ENUMERATION_BITS']
    assert hgconfiguration.get_configuration_data() == data


def test_missing_configuration_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        hgconfiguration.load_configuration(str(tmp_path / 'missing.yaml'))


def test_configuration_must_be_a_mapping(tmp_path, restore_config):
    path = tmp_path / 'list.yaml'
    path.write_text('- 1\n- 2\n')
    with pytest.raises(ValueError):
        hgconfiguration.load_configuration(str(path))


def test_full_configuration_without_file(restore_config):
    restore_config.PRESERVED_ORDER = []
    data = hgconfiguration.get_configuration_data()
    assert data['SIM_THREADS'] == restore_config.SIM_THREADS
    assert 'PRESERVED_ORDER' not in data


def test_save_configuration(tmp_path, restore_config):
    hgpy.load_config_data_from_string({'SIM_TRIALS_PER_WEIGHT': 9})
    assert restore_config.SIM_TRIALS_PER_WEIGHT == 9

    path = tmp_path / 'saved.yaml'
    assert hgconfiguration.save_configuration(str(path), {'SIM_TRIALS_PER_WEIGHT': 9, 'LOG_LEVEL': 'DEBUG'})
    with open(path) as f:
        assert list(yaml.safe_load(f)) == ['SIM_TRIALS_PER_WEIGHT', 'LOG_LEVEL']

    assert not hgconfiguration.save_configuration(str(tmp_path / 'saved.txt'))


def test_save_run_configuration_writes_every_value(tmp_path, restore_config):
    path = tmp_path / 'limits.yaml'
    path.write_text('SIM_THREADS: 3\n')
    hgconfiguration.load_configuration(str(path))
    assert list(hgconfiguration.get_configuration_data()) == ['SIM_THREADS']

    saved_path = hgconfiguration.save_run_configuration(str(tmp_path / 'run.jsonl'))
    assert saved_path == str(tmp_path / 'run.jsonl.config.yaml')
    with open(saved_path) as f:
        saved = yaml.safe_load(f)
    assert saved == hgconfiguration.get_configuration_data(full=True)
    assert saved['SIM_THREADS'] == 3
    assert 'VERIFY_RANDOM_TRIALS' in saved
