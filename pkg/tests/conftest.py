import pytest

from familyplan import cli


@pytest.fixture
def run_cli(capsys):
    """Invoke the CLI in-process, returning (exit_code, stdout, stderr)."""

    def run(args):
        code = cli.main(args)
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run
