"""Tests for the command-line entry point and report plumbing."""

import json
from pathlib import Path

import pytest
import yaml

from src.commands import COMMANDS
from src.commands.common import REPORT_SCHEMA, RunConfig, round_numbers
from src.embedding_lab import EXIT_ACCEPTANCE, EXIT_OK, EXIT_SPEC_ERROR, build_parser, main
from src.utils.exceptions import ValidationError

FIXTURES = Path(__file__).parent / 'fixtures'


@pytest.fixture
def profile_csv(tmp_path):
    """Profile 3 on (0,2) and 1 on (2,4)."""
    path = tmp_path / 'profile.csv'
    path.write_text("s,v\n2,3\n4,1\n")
    return path


@pytest.fixture
def samples_csv(tmp_path):
    """Unsorted weighted samples of the same profile."""
    path = tmp_path / 'samples.csv'
    path.write_text("value,weight\n1,2\n3,1.5\n3,0.5\n")
    return path


def run_main(argv):
    """Run main and return its exit code."""
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    return excinfo.value.code


class TestParser:
    """Test the argument parser."""

    def test_subcommands(self):
        """Test every command is registered."""
        required = {
            'norm': ['--space', 'lebesgue:1'],
            'target': ['--young', 'power:2', '--n', '2'],
            'modulus': ['--example', 'linf', '--n', '2'],
            'verify-hardy': ['--X', 'lebesgue:1', '--Y', 'lebesgue:inf', '--n', '2'],
            'verify-sobolev2d': ['--suite', 'sobolev'],
        }
        parser = build_parser()
        for name in COMMANDS:
            args = parser.parse_args([name] + required.get(name, []))
            assert args.command == name
            assert args.handler == COMMANDS[name]

    def test_missing_command(self):
        """Test a command is required."""
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class TestRunConfig:
    """Test run validation and reports."""

    def test_invalid_options(self):
        """Test dimensions, lengths and seeds are validated."""
        with pytest.raises(ValidationError):
            RunConfig('target', {'n': 1})
        with pytest.raises(ValidationError):
            RunConfig('norm', {'L': 0.0})
        with pytest.raises(ValidationError, match="Invalid seed"):
            RunConfig('verify-k', {'seed': -1})

    def test_round_numbers(self):
        """Test report values keep twelve significant digits and spell out non-finite floats."""
        assert round_numbers({'a': [1.0 / 3.0, float('inf'), float('nan')]}) == \
            {'a': [0.333333333333, 'inf', 'nan']}
        assert round_numbers(True) is True


class TestMain:
    """Test runs end to end."""

    def test_rearrange(self, tmp_path, samples_csv):
        """Test a rearrangement report and its CSV table."""
        output = tmp_path / 'report.json'
        table = tmp_path / 'profile.csv'
        code = run_main(['--output', str(output), '--csv', str(table),
                         'rearrange', '--samples', str(samples_csv), '--at', '3'])
        assert code == EXIT_OK
        report = json.loads(output.read_text())
        assert set(report) == {'schema', 'command', 'config', 'result', 'regularizations', 'timestamp'}
        assert report['schema'] == REPORT_SCHEMA
        assert report['command'] == 'rearrange'
        assert report['result']['breakpoints'] == [2.0, 4.0]
        assert report['result']['values'] == [3.0, 1.0]
        assert report['result']['at'] == [[3.0, 1.0, pytest.approx(7.0 / 3.0)]]
        assert table.read_text().splitlines()[0] == 's,v'

    def test_norm_stdout(self, capsys, profile_csv):
        """Test the report goes to stdout without --output."""
        code = run_main(['--tol', 'bisection.iterations=80', 'norm', '--space', 'lebesgue:1',
                         '--profile', str(profile_csv)])
        assert code == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report['result']['norm'] == pytest.approx(8.0)
        assert report['config']['overrides'] == ['bisection.iterations=80']

    def test_spec_error(self, tmp_path):
        """Test input errors exit with code 2."""
        assert run_main(['norm', '--space', 'lebesgue:1', '--profile', str(tmp_path / 'missing.csv')]) \
            == EXIT_SPEC_ERROR

    def test_unsupported_space(self, profile_csv):
        """Test unsupported spaces exit with code 2."""
        assert run_main(['norm', '--space', 'lebesgue:0.5', '--profile', str(profile_csv)]) == EXIT_SPEC_ERROR

    def test_bad_override(self, profile_csv):
        """Test unknown tolerance keys exit with code 2."""
        assert run_main(['--tol', 'bisection.nope=1', 'norm', '--space', 'lebesgue:1',
                         '--profile', str(profile_csv)]) == EXIT_SPEC_ERROR

    def test_unexpected_error(self, mocker, profile_csv):
        """Test unexpected failures exit with code 1."""
        mocker.patch('src.commands.norm.run', side_effect=RuntimeError('boom'))
        assert run_main(['norm', '--space', 'lebesgue:1', '--profile', str(profile_csv)]) == 1

    def test_interrupt(self, mocker, profile_csv):
        """Test interrupts exit with code 1."""
        mocker.patch('src.commands.norm.run', side_effect=KeyboardInterrupt)
        assert run_main(['norm', '--space', 'lebesgue:1', '--profile', str(profile_csv)]) == 1


class TestGolden:
    """Test the golden-table regression."""

    def test_bundled_fixture(self, tmp_path):
        """Test the bundled cases match the fixture."""
        code = run_main(['--output', str(tmp_path / 'golden.json'), 'golden',
                         '--check', str(FIXTURES / 'golden_tables.yaml')])
        assert code == EXIT_OK

    def test_mismatch(self, tmp_path):
        """Test a tampered fixture fails the acceptance check."""
        fixture = yaml.safe_load((FIXTURES / 'golden_tables.yaml').read_text())
        key = sorted(fixture['moduli'])[0]
        fixture['moduli'][key] = 'r^7'
        tampered = tmp_path / 'tampered.yaml'
        tampered.write_text(yaml.safe_dump(fixture))
        code = run_main(['--output', str(tmp_path / 'golden.json'), 'golden', '--check', str(tampered)])
        assert code == EXIT_ACCEPTANCE

    def test_write(self, tmp_path):
        """Test regenerated tables can be written and reread."""
        written = tmp_path / 'tables.yaml'
        code = run_main(['--output', str(tmp_path / 'golden.json'), 'golden', '--write', str(written)])
        assert code == EXIT_OK
        assert yaml.safe_load(written.read_text()) == \
            yaml.safe_load((FIXTURES / 'golden_tables.yaml').read_text())
