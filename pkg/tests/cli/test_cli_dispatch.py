from label_diffusion.cli.config import RunConfig
from tests.cli.helpers import run_cli


def test_command_receives_resolved_config(mocker, tmp_path):
    mock_run = mocker.patch("label_diffusion.cli.parsers.run_gen")
    assert run_cli("gen", "-n", "3", "--image-size", "32", "--output", tmp_path) == 0

    mock_run.assert_called_once()
    args, config = mock_run.call_args.args
    assert args.command == "gen"
    assert isinstance(config, RunConfig)
    assert config.command == "gen"
    assert config.n_scenes == 3
    assert config.image_size == 32
    assert config.output == str(tmp_path)


def test_unexpected_exception_is_reported_as_internal(mocker, tmp_path, capsys):
    mocker.patch("label_diffusion.cli.parsers.run_gen", side_effect=KeyError("boom"))
    assert run_cli("gen", "-n", "1", "--output", tmp_path) == 1
    err = capsys.readouterr().err
    assert err.strip().splitlines()[-1].startswith("error: internal:")


def test_log_level_is_forwarded(mocker, tmp_path):
    mocker.patch("label_diffusion.cli.parsers.run_gen")
    configure = mocker.patch("label_diffusion.cli.main.configure_logging")
    assert run_cli("--log-level", "DEBUG", "gen", "-n", "1", "--output", tmp_path) == 0
    configure.assert_called_once_with("DEBUG")
