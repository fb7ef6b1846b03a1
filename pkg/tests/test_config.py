import json
import os

import pytest

import config


def test_update_applies_known_keys():
    applied = config.update_settings_from_dict({'equality_tol': "1e-8", 'batch_size': 64, 'alpha_grid': [0, "0.5"]})
    assert sorted(applied) == ['alpha_grid', 'batch_size', 'equality_tol']
    assert config.EQUALITY_TOL == pytest.approx(1e-8)
    assert config.BATCH_SIZE == 64
    assert config.ALPHA_GRID == [0.0, 0.5]


def test_update_ignores_unknown_keys():
    assert config.update_settings_from_dict({'camera_index': 3}) == []


def test_bad_values_are_skipped(capsys):
    before = config.MAX_SWEEPS
    assert config.update_settings_from_dict({'max_sweeps': "many"}) == []
    assert config.MAX_SWEEPS == before
    assert "ignoring setting 'max_sweeps'" in capsys.readouterr().err


@pytest.mark.parametrize("key, value, attribute, expected", [
    ('batch_size', 0, 'BATCH_SIZE', 1),
    ('jobs', -2, 'JOBS', 0),
    ('max_sweeps', 0, 'MAX_SWEEPS', 100),
    ('output_format', 'xml', 'OUTPUT_FORMAT', 'table'),
])
def test_unsafe_values_are_clamped(capsys, key, value, attribute, expected):
    config.update_settings_from_dict({key: value})
    assert getattr(config, attribute) == expected
    assert "⚠ Warning" in capsys.readouterr().err


@pytest.mark.parametrize("value, expected", [("false", False), ("yes", True), (0, False), (True, True)])
def test_show_progress_coercion(value, expected):
    config.update_settings_from_dict({'show_progress': value})
    assert config.SHOW_PROGRESS is expected


def test_save_then_load(tmp_path):
    path = str(tmp_path / "settings.json")
    settings = config.get_current_settings()
    settings['equality_tol'] = 1e-7
    settings['default_tree_orders'] = [2, 3]
    assert config.save_settings_to_file(settings, path)

    config.update_settings_from_dict({'equality_tol': 1e-9})
    assert config.load_settings(path)
    assert config.EQUALITY_TOL == pytest.approx(1e-7)
    assert config.DEFAULT_TREE_ORDERS == [2, 3]


def test_load_missing_file(tmp_path):
    assert not config.load_settings(str(tmp_path / "absent.json"))


def test_load_invalid_json(tmp_path, capsys):
    path = tmp_path / "settings.json"
    path.write_text("{not json")
    assert not config.load_settings(str(path))
    assert "Could not load settings" in capsys.readouterr().err

    path.write_text(json.dumps([1, 2]))
    assert not config.load_settings(str(path))


def test_current_settings_cover_every_key():
    settings = config.get_current_settings()
    assert settings['eigen_tol'] == config.EIGEN_TOL
    assert settings['unicyclic_min_order'] == config.UNICYCLIC_MIN_ORDER
    assert json.loads(json.dumps(settings)) == settings


def test_effective_jobs(monkeypatch):
    assert config.effective_jobs(3) == 3
    monkeypatch.setattr(config, 'JOBS', 2)
    assert config.effective_jobs(None) == 2
    assert config.effective_jobs(0) == 2
    monkeypatch.setattr(config, 'JOBS', 0)
    monkeypatch.setattr(os, 'cpu_count', lambda: None)
    assert config.effective_jobs() == 1


def test_resource_paths():
    assert config.get_resource_path("settings.json") == os.path.join(config.BASE_DIR, "settings.json")
    absolute = os.path.abspath("elsewhere.json")
    assert config.get_resource_path(absolute) == absolute


def test_base_dir_is_the_project_root():
    assert config.get_base_dir() == os.path.dirname(os.path.abspath(config.__file__))
    assert os.path.isfile(os.path.join(config.get_base_dir(), "settings.json"))
